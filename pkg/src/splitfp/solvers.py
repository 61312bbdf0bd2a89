"""The iteration step functions and the shared run driver.

Each family's update is a pure function: current state in, next state plus
the step's intermediates and residuals out.  The driver applies a step
repeatedly, records a self-describing trace, and stops on the first enabled
criterion.  The recorded residuals are exactly the quantities the
convergence analyses drive to zero, so residual decay is a meaningful
diagnostic for every family.
"""

from dataclasses import dataclass, field

import numpy as np

from .operators import DomainEscape, convex_combine, power_apply, relax
from .problems import (
    EXTRAGRADIENT_SFFPP,
    SCFPP,
    SCFPP_ADAPTIVE,
    SCFPEP,
    SFFPEP,
    SYNCHRONAL_VIP,
    IterationTrace,
    TraceRecord,
    ValidationError,
)
from .projections import (
    DykstraNoConvergence,
    InfeasibleIntersection,
    Intersection,
    halfspace_from_distance_dominance,
    project,
)
from .spaces import norm

__all__ = [
    "StepResult",
    "step_scfpp",
    "step_scfpp_adaptive",
    "step_synchronal",
    "step_sffpep",
    "step_scfpep",
    "step_extragradient",
    "run",
    "SolverError",
    "AdjointInconsistency",
    "CutCapExceeded",
]


class SolverError(RuntimeError):
    """Numerical breakdown inside a step; carries the iteration index."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class AdjointInconsistency(SolverError):
    """The adjoint annihilated a nonzero residual (possible only for A = 0)."""


class CutCapExceeded(SolverError):
    """The extra-gradient cut list outgrew the configured cap."""


# failures a step can legitimately surface; the driver annotates them with
# the iteration index
_STEP_FAILURES = (SolverError, InfeasibleIntersection, DykstraNoConvergence,
                  DomainEscape)


@dataclass
class StepResult:
    x: np.ndarray
    y: np.ndarray | None = None
    intermediates: dict = field(default_factory=dict)
    step: float | None = None
    residual_primary: float | None = None
    residual_coupling: float | None = None
    cuts: list | None = None   # full cut list after an extra-gradient step


# ---------------------------------------------------------------------------
# one-variable families


def step_scfpp(spec, x, n):
    """Adjoint-corrected iterate-power step.

    u_n = x_n + gamma A*(T^{n+1} - I) A x_n, then the averaged update
    x_{n+1} = alpha_n u_n + (1 - alpha_n) G^{n+1} u_n.  The exponent is
    n + 1 at iteration counter n, so the first step applies the operators
    once rather than degenerating to the identity power.
    """
    A = spec.A
    ax = A.apply(x)
    t_ax = power_apply(spec.T, n + 1, ax)
    image_residual = norm(t_ax - ax)
    u = x + spec.gamma * A.apply_adjoint(t_ax - ax)
    g_u = power_apply(spec.G, n + 1, u)
    alpha = spec.alpha(n)
    x_next = alpha * u + (1.0 - alpha) * g_u
    primal_residual = norm(g_u - u)
    return StepResult(
        x=x_next,
        intermediates={"u": u},
        step=spec.gamma,
        residual_primary=max(primal_residual, image_residual),
        residual_coupling=image_residual,
    )


def step_scfpp_adaptive(spec, x, n):
    """Norm-free variant: the correction step is chosen from the residual.

    rho_n = (1-k) ||(I-T)Ax||^2 / (2 ||A*(I-T)Ax||^2) when TAx differs from
    Ax (scale-aware zero test), else 0 with u_n = x_n exactly.
    """
    A = spec.A
    ax = A.apply(x)
    t_ax = spec.T(ax)
    diff = t_ax - ax
    image_residual = norm(diff)
    threshold = 1e-14 * (1.0 + norm(ax))
    if image_residual <= threshold:
        rho = 0.0
        u = x
    else:
        adj = A.apply_adjoint(diff)
        denom = norm(adj) ** 2
        if denom == 0.0:
            raise AdjointInconsistency(
                "A* annihilates a residual of norm %.3e" % image_residual, n
            )
        k = spec.demicontractive_k()
        rho = (1.0 - k) * image_residual ** 2 / (2.0 * denom)
        u = x + rho * adj
    u_u = spec.U(u)
    alpha = spec.alpha(n)
    x_next = (1.0 - alpha) * u + alpha * u_u
    return StepResult(
        x=x_next,
        intermediates={"u": u},
        step=rho,
        residual_primary=max(norm(u_u - u), image_residual),
        residual_coupling=image_residual,
    )


def step_synchronal(spec, x, n):
    """Viscosity / hybrid steepest-descent step around the averaged power.

    x_{n+1} = alpha_n gamma f(x_n) + (I - alpha_n mu G)(beta_n x_n +
    (1 - beta_n) T^{n+1} x_n).
    """
    alpha = spec.alpha(n)
    beta = spec.beta(n)
    t_pow = power_apply(spec.T, n + 1, x, check_domain=False)
    averaged = beta * x + (1.0 - beta) * t_pow
    x_next = (
        alpha * spec.gamma_visc * spec.f(x)
        + averaged
        - alpha * spec.mu * spec.G(averaged)
    )
    return StepResult(
        x=x_next,
        intermediates={"u": averaged},
        step=alpha,
        residual_primary=norm(x - t_pow),
    )


# ---------------------------------------------------------------------------
# two-variable (equality) families


def _block_operators(spec, u_op, t_op):
    if spec.branch_assignment == "swapped":
        return t_op, u_op
    return u_op, t_op


def _equality_step(spec, x, y, n, u_op, t_op, project_blocks):
    A, B = spec.A, spec.B
    lam = spec.lam(n)
    alpha = spec.alpha(n)
    beta = spec.beta(n)
    gap = A.apply(x) - B.apply(y)
    coupling = norm(gap)

    z = x - lam * A.apply_adjoint(gap)
    if project_blocks:
        z = project(spec.C, z)
    uz = u_op(z)
    w = (1.0 - beta) * z + beta * uz
    x_next = (1.0 - alpha) * z + alpha * u_op(w)

    u = y + lam * B.apply_adjoint(gap)
    if project_blocks:
        u = project(spec.Q, u)
    tu = t_op(u)
    r = (1.0 - beta) * u + beta * tu
    y_next = (1.0 - alpha) * u + alpha * t_op(r)

    residual = max(coupling, norm(uz - z), norm(tu - u))
    return StepResult(
        x=x_next,
        y=y_next,
        intermediates={"z": z, "w": w, "u": u, "r": r},
        step=lam,
        residual_primary=residual,
        residual_coupling=coupling,
    )


def step_sffpep(spec, x, y, n):
    """Simultaneous projected update of both blocks of the equality problem.

    The x block moves against A*(Ax - By), projects onto C, and applies U in
    an inner/outer averaged pattern; the y block mirrors it with B, Q, T.
    """
    u_op, t_op = _block_operators(spec, spec.U, spec.T)
    return _equality_step(spec, x, y, n, u_op, t_op, project_blocks=True)


def _scfpep_effective(spec):
    if not hasattr(spec, "_effective_ops"):
        u_eff = convex_combine(
            [relax(m, g) for m, g in zip(spec.U_family, spec.u_relax)],
            spec.u_weights,
        )
        t_eff = convex_combine(
            [relax(m, t) for m, t in zip(spec.T_family, spec.t_relax)],
            spec.t_weights,
        )
        spec._effective_ops = (u_eff, t_eff)
    return spec._effective_ops


def step_scfpep(spec, x, y, n):
    """Equality step over convex combinations of relaxed operator families.

    Builds U = sum_j delta_j U_{gamma_j} and T = sum_i lambda_i T_{tau_i}
    once, then runs the unprojected equality update.  ``branch_assignment``
    chooses which block receives which combined operator; the published
    reference table for this family matches the swapped assignment, not the
    printed one, so both are available.
    """
    u_eff, t_eff = _scfpep_effective(spec)
    u_op, t_op = _block_operators(spec, u_eff, t_eff)
    return _equality_step(spec, x, y, n, u_op, t_op, project_blocks=False)


# ---------------------------------------------------------------------------
# extra-gradient family


def _extragradient_correction(spec, v):
    av = spec.A.apply(v)
    mapped = spec.G(project(spec.Q, av))
    return spec.A.apply_adjoint(av - mapped)


def step_extragradient(spec, x, cuts, x0, n):
    """Double-extrapolation step with distance-dominance cuts.

    Computes two projected extrapolations y_n, z_n, an Ishikawa-style inner
    point, and the anchor w_n; appends the three halfspaces

        ||w_n - z|| <= ||z_n - z||,  ||z_n - z|| <= ||y_n - z||,
        ||y_n - z|| <= ||x_n - z||

    to the cut list and projects the *initial* point onto C intersected
    with every cut so far.  Cuts are never dropped: the nesting of the cut
    sets is what the strong-convergence argument rests on.
    """
    gamma = spec.gamma_seq(n)
    alpha = spec.alpha(n)
    beta = spec.beta(n)
    y_pt = project(spec.C, x - gamma * _extragradient_correction(spec, x))
    z_pt = project(spec.C, y_pt - gamma * _extragradient_correction(spec, y_pt))
    inner_pt = (1.0 - beta) * z_pt + beta * spec.T(z_pt)
    w_pt = (1.0 - alpha) * z_pt + alpha * spec.T(inner_pt)

    new_cuts = list(cuts)
    new_cuts.append(halfspace_from_distance_dominance(w_pt, z_pt))
    new_cuts.append(halfspace_from_distance_dominance(z_pt, y_pt))
    new_cuts.append(halfspace_from_distance_dominance(y_pt, x))
    if len(new_cuts) > spec.cut_cap:
        raise CutCapExceeded(
            "cut list grew to %d, beyond the cap %d" % (len(new_cuts), spec.cut_cap),
            n,
        )
    x_next = project(Intersection([spec.C, *new_cuts]), x0)
    return StepResult(
        x=x_next,
        intermediates={"u": y_pt, "z": z_pt, "w": w_pt, "r": inner_pt},
        step=gamma,
        residual_primary=norm(x_next - x),
        cuts=new_cuts,
    )


# ---------------------------------------------------------------------------
# driver

_INTERMEDIATE_SLOTS = {
    SCFPP: ("u",),
    SCFPP_ADAPTIVE: ("u",),
    SYNCHRONAL_VIP: ("u",),
    SFFPEP: ("u", "z", "w", "r"),
    SCFPEP: ("u", "z", "w", "r"),
    EXTRAGRADIENT_SFFPP: ("u", "z", "w", "r"),
}


def _distance_to_reference(spec, x, y):
    if spec.reference_solution is None:
        return None
    if spec.two_variable:
        x_ref, y_ref = spec.reference_solution
        return float(np.sqrt(norm(x - x_ref) ** 2 + norm(y - y_ref) ** 2))
    (x_ref,) = spec.reference_solution
    return norm(x - x_ref)


def _initial_residual(spec, x, y):
    fam = spec.family
    if fam == SCFPP:
        ax = spec.A.apply(x)
        return max(norm(spec.G(x) - x), norm(spec.T(ax) - ax))
    if fam == SCFPP_ADAPTIVE:
        ax = spec.A.apply(x)
        return max(norm(spec.U(x) - x), norm(spec.T(ax) - ax))
    if fam == SYNCHRONAL_VIP:
        return norm(spec.T(x) - x)
    if fam in (SFFPEP, SCFPEP):
        if fam == SCFPEP:
            u_op, t_op = _block_operators(spec, *_scfpep_effective(spec))
        else:
            u_op, t_op = _block_operators(spec, spec.U, spec.T)
        gap = norm(spec.A.apply(x) - spec.B.apply(y))
        return max(gap, norm(u_op(x) - x), norm(t_op(y) - y))
    # extra-gradient: the per-step residual ||x_{n+1} - x_n|| has no n = 0
    # analogue, so the initial record carries the fixed-point residual
    return norm(spec.T(x) - x)


def _step_once(spec, x, y, cuts, x0, n):
    fam = spec.family
    if fam == SCFPP:
        return step_scfpp(spec, x, n)
    if fam == SCFPP_ADAPTIVE:
        return step_scfpp_adaptive(spec, x, n)
    if fam == SYNCHRONAL_VIP:
        return step_synchronal(spec, x, n)
    if fam == SFFPEP:
        return step_sffpep(spec, x, y, n)
    if fam == SCFPEP:
        return step_scfpep(spec, x, y, n)
    return step_extragradient(spec, x, cuts, x0, n)


def run(spec, x0, y0=None, rule=None):
    """Drive a family's step function under a stopping rule.

    Returns an :class:`IterationTrace` whose record 0 is the initial point;
    ``max_iters = m`` therefore yields at most ``m + 1`` records.  Stopping
    criteria are checked after each step in the order residual, stagnation,
    target; the trace records which one fired.  Domain membership of the
    starting point is the caller's concern: the recurrences evaluate the
    operators wherever they lead, as the published trajectories do.
    """
    if rule is None:
        raise ValidationError("a stopping rule is required")
    x = np.atleast_1d(np.asarray(x0, dtype=float))
    if spec.two_variable:
        if y0 is None:
            raise ValidationError("family %r iterates two blocks; y0 missing"
                                  % spec.family)
        y = np.atleast_1d(np.asarray(y0, dtype=float))
    else:
        y = None
    is_extragradient = spec.family == EXTRAGRADIENT_SFFPP
    cuts = [] if is_extragradient else None

    records = [
        TraceRecord(
            n=0,
            x=x,
            y=y,
            residual_primary=_initial_residual(spec, x, y),
            dist_to_target=_distance_to_reference(spec, x, y),
            cut_count=0 if is_extragradient else None,
        )
    ]
    stop_reason = "max_iters"
    for n in range(rule.max_iters):
        try:
            result = _step_once(spec, x, y, cuts, records[0].x, n)
        except _STEP_FAILURES as err:
            raise SolverError("iteration %d: %s" % (n, err), n) from err
        moved = norm(result.x - x) if y is None else float(
            np.sqrt(norm(result.x - x) ** 2 + norm(result.y - y) ** 2)
        )
        x = result.x
        y = result.y
        if is_extragradient:
            cuts = result.cuts
        dist = _distance_to_reference(spec, x, y)
        records.append(
            TraceRecord(
                n=n + 1,
                x=x,
                y=y,
                u=result.intermediates.get("u"),
                z=result.intermediates.get("z"),
                w=result.intermediates.get("w"),
                r=result.intermediates.get("r"),
                step=result.step,
                residual_primary=result.residual_primary,
                residual_coupling=result.residual_coupling,
                dist_to_target=dist,
                cut_count=len(cuts) if is_extragradient else None,
            )
        )
        if rule.residual_tol is not None and result.residual_primary <= rule.residual_tol:
            stop_reason = "residual_tol"
            break
        if rule.stagnation_tol is not None and moved <= rule.stagnation_tol:
            stop_reason = "stagnation_tol"
            break
        if rule.target_tol is not None and dist is not None and dist <= rule.target_tol:
            stop_reason = "target_tol"
            break
    return IterationTrace(
        family=spec.family,
        records=records,
        stop_reason=stop_reason,
        intermediates=_INTERMEDIATE_SLOTS[spec.family],
    )
