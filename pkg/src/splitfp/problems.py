"""Problem descriptions, stopping rules, and iteration traces.

A :class:`ProblemSpec` names one of six solver families and carries the
operators, linear maps, sets, and parameter sequences that family needs.
Construction checks completeness; parameter-range checks against the
convergence theory are collected as warnings and raised only when
``enforce_ranges`` is set (the bundled reference configurations knowingly
sit outside the theoretical ranges and disable enforcement).
"""

from dataclasses import dataclass, field

import numpy as np

from .operators import (
    Contraction,
    Demicontractive,
    Directed,
    FirmlyQuasiNonexpansive,
    FixedPointMap,
    Lipschitzian,
    Nonexpansive,
    QuasiNonexpansive,
    SequenceSpec,
    StronglyMonotone,
    UniformlyLipschitzian,
)
from .projections import ConvexBody
from .spaces import LinearMap, estimate_norm_squared

__all__ = [
    "SCFPP",
    "SCFPP_ADAPTIVE",
    "SYNCHRONAL_VIP",
    "SFFPEP",
    "SCFPEP",
    "EXTRAGRADIENT_SFFPP",
    "FAMILIES",
    "ProblemSpec",
    "StoppingRule",
    "TraceRecord",
    "IterationTrace",
    "ValidationError",
]

SCFPP = "scfpp"
SCFPP_ADAPTIVE = "scfpp_adaptive"
SYNCHRONAL_VIP = "synchronal_vip"
SFFPEP = "sffpep"
SCFPEP = "scfpep"
EXTRAGRADIENT_SFFPP = "extragradient_sffpp"

FAMILIES = (SCFPP, SCFPP_ADAPTIVE, SYNCHRONAL_VIP, SFFPEP, SCFPEP,
            EXTRAGRADIENT_SFFPP)

_TWO_VARIABLE = (SFFPEP, SCFPEP)


class ValidationError(ValueError):
    """Problem description incomplete or out of range."""


def _demicontractive_constant(cls):
    if isinstance(cls, Demicontractive):
        return cls.k
    if isinstance(cls, QuasiNonexpansive):
        return 0.0
    if isinstance(cls, (FirmlyQuasiNonexpansive, Directed)):
        return -1.0
    return None


def _lipschitz_constant(m):
    for cls in (m.declared_class, *m.extra_classes):
        if isinstance(cls, (Lipschitzian, UniformlyLipschitzian)):
            return cls.K
        if isinstance(cls, Contraction):
            return cls.k
        if isinstance(cls, Nonexpansive):
            return 1.0
    return None


def _strong_monotonicity(m):
    for cls in (m.declared_class, *m.extra_classes):
        if isinstance(cls, StronglyMonotone):
            return cls.eta
    return None


def _seq_range_ok(seq, lo, hi, upto=100):
    """Sampled range check over n = 0..upto-1 (limits are not decidable)."""
    for n in range(upto):
        v = seq(n)
        if not (lo < v < hi):
            return n, v
    return None


@dataclass
class ProblemSpec:
    """One of the six split fixed-point problem families.

    Operator slots by family:

    - ``scfpp``: ``G`` acts on the primal space, ``T`` on the image space,
      coupled through ``A``; fixed scalar step ``gamma``.
    - ``scfpp_adaptive``: ``U`` primal, ``T`` image, step chosen per
      iteration from the residual (no norm information needed).
    - ``synchronal_vip``: fixed-point map ``T``, contraction ``f``,
      strongly monotone Lipschitz operator ``G``; scalars ``mu`` and
      ``gamma_visc``.
    - ``sffpep``: ``U`` on the x block, ``T`` on the y block, coupled by
      ``A``, ``B`` with projections onto ``C``, ``Q`` and step sequence
      ``lam``.
    - ``scfpep``: finite families ``U_family``/``T_family`` with relaxation
      weights and convex-combination weights; no projections.
    - ``extragradient_sffpp``: ``T`` primal, ``G`` image, sets ``C``, ``Q``,
      step sequence ``gamma_seq``; accumulates distance-dominance cuts.
    """

    family: str
    T: FixedPointMap | None = None
    G: FixedPointMap | None = None
    U: FixedPointMap | None = None
    f: FixedPointMap | None = None
    U_family: tuple = ()
    u_relax: tuple = ()        # relaxation weight per member of U_family
    u_weights: tuple = ()      # convex-combination weights
    T_family: tuple = ()
    t_relax: tuple = ()
    t_weights: tuple = ()
    A: LinearMap | None = None
    B: LinearMap | None = None
    C: ConvexBody | None = None
    Q: ConvexBody | None = None
    alpha: SequenceSpec | None = None
    beta: SequenceSpec | None = None
    lam: SequenceSpec | None = None        # coupling step for the equality families
    gamma: float | None = None             # fixed adjoint-correction step (scfpp)
    gamma_seq: SequenceSpec | None = None  # extra-gradient step sequence
    mu: float | None = None                # synchronal scalars
    gamma_visc: float | None = None
    reference_solution: tuple | None = None
    branch_assignment: str = "as_printed"  # or "swapped": exchange block operators
    gamma_bound_choice: str = "l_star"     # or "lipschitz": cap for gamma
    cut_cap: int = 10000
    enforce_ranges: bool = True
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValidationError("unknown family %r" % (self.family,))
        if self.branch_assignment not in ("as_printed", "swapped"):
            raise ValidationError("branch_assignment must be as_printed|swapped")
        if self.gamma_bound_choice not in ("l_star", "lipschitz"):
            raise ValidationError("gamma_bound_choice must be l_star|lipschitz")
        if self.reference_solution is not None:
            ref = self.reference_solution
            if self.two_variable:
                x_ref = np.atleast_1d(np.asarray(ref[0], dtype=float))
                y_ref = np.atleast_1d(np.asarray(ref[1], dtype=float))
                self.reference_solution = (x_ref, y_ref)
            else:
                self.reference_solution = (
                    np.atleast_1d(np.asarray(ref, dtype=float)),
                )
        self.validate()

    # -- structural helpers -------------------------------------------------

    @property
    def two_variable(self):
        return self.family in _TWO_VARIABLE

    def _require(self, names):
        missing = [n for n in names if not getattr(self, n)]
        if missing:
            raise ValidationError(
                "family %r requires %s" % (self.family, ", ".join(missing))
            )

    def _range_warning(self, message):
        self.warnings.append(message)
        if self.enforce_ranges:
            raise ValidationError(message)

    def _check_seq_in(self, name, lo, hi):
        seq = getattr(self, name)
        bad = _seq_range_ok(seq, lo, hi)
        if bad is not None:
            self._range_warning(
                "%s(n=%d) = %g outside (%g, %g)" % (name, bad[0], bad[1], lo, hi)
            )

    # -- validation ----------------------------------------------------------

    def validate(self):
        fam = self.family
        if fam == SCFPP:
            self._require(["T", "G", "A", "alpha"])
            if self.gamma is None:
                raise ValidationError("scfpp needs the scalar step gamma")
            self._check_seq_in("alpha", 0.0, 1.0)
            bound = self.gamma_cap()
            if not 0.0 < self.gamma < bound:
                self._range_warning(
                    "gamma = %g outside (0, %g)" % (self.gamma, bound)
                )
        elif fam == SCFPP_ADAPTIVE:
            self._require(["U", "T", "A", "alpha"])
            k = self.demicontractive_k()
            self._check_seq_in("alpha", 0.0, min(1.0, 1.0 - k))
        elif fam == SYNCHRONAL_VIP:
            self._require(["T", "f", "G", "alpha", "beta"])
            if self.mu is None or self.gamma_visc is None:
                raise ValidationError("synchronal needs mu and gamma_visc")
            if not isinstance(self.f.declared_class, Contraction):
                raise ValidationError("f must declare Contraction(k)")
            eta = _strong_monotonicity(self.G)
            lip = _lipschitz_constant(self.G)
            if eta is None or lip is None:
                raise ValidationError(
                    "G must declare a strong-monotonicity modulus and a "
                    "Lipschitz constant"
                )
            if not 0.0 < self.mu < 2.0 * eta / lip ** 2:
                self._range_warning(
                    "mu = %g outside (0, %g)" % (self.mu, 2.0 * eta / lip ** 2)
                )
            tau = self.synchronal_tau()
            kf = self.f.declared_class.k
            if not 0.0 < self.gamma_visc < tau / kf:
                self._range_warning(
                    "gamma_visc = %g outside (0, %g)" % (self.gamma_visc, tau / kf)
                )
            self._check_seq_in("alpha", 0.0, 1.0)
            k_t = getattr(self.T.declared_class, "k", 0.0) or 0.0
            bad = _seq_range_ok(self.beta, max(0.0, k_t) - 1e-15, 1.0)
            if bad is not None:
                self._range_warning(
                    "beta(n=%d) = %g outside [%g, 1)" % (bad[0], bad[1], max(0.0, k_t))
                )
        elif fam == SFFPEP:
            self._require(["U", "T", "A", "B", "C", "Q", "alpha", "beta", "lam"])
            self._check_seq_in("alpha", 0.0, 1.0)
            self._check_seq_in("beta", 0.0, 1.0)
            self._check_lambda_cap()
        elif fam == SCFPEP:
            self._require(["U_family", "T_family", "A", "B", "alpha", "beta", "lam"])
            for nm, weights in (("u_weights", self.u_weights),
                                ("t_weights", self.t_weights)):
                if not weights:
                    raise ValidationError("scfpep needs %s" % nm)
                if any(w <= 0 for w in weights):
                    raise ValidationError("%s must be positive" % nm)
                if abs(sum(weights) - 1.0) > 1e-12:
                    raise ValidationError("%s must sum to 1" % nm)
            for nm, rel, fam_ops in (("u_relax", self.u_relax, self.U_family),
                                     ("t_relax", self.t_relax, self.T_family)):
                if len(rel) != len(fam_ops):
                    raise ValidationError("%s must match its operator family" % nm)
                if any(not 0.0 < r < 1.0 for r in rel):
                    self._range_warning("%s entries must lie in (0, 1)" % nm)
            self._check_seq_in("alpha", 0.0, 1.0)
            self._check_seq_in("beta", 0.0, 1.0)
            self._check_lambda_cap()
        elif fam == EXTRAGRADIENT_SFFPP:
            self._require(["T", "G", "A", "C", "Q", "alpha", "beta", "gamma_seq"])
            self._check_seq_in("alpha", 0.0, 1.0)
            self._check_seq_in("beta", 0.0, 1.0)
            cap = 1.0 / estimate_norm_squared(self.A)
            bad = _seq_range_ok(self.gamma_seq, 0.0, cap)
            if bad is not None:
                self._range_warning(
                    "gamma_seq(n=%d) = %g outside (0, %g)" % (bad[0], bad[1], cap)
                )
            if self.cut_cap < 3:
                raise ValidationError("cut_cap must allow at least one iteration")

    def _check_lambda_cap(self):
        cap = 2.0 / (estimate_norm_squared(self.A) + estimate_norm_squared(self.B))
        bad = _seq_range_ok(self.lam, 0.0, cap)
        if bad is not None:
            self._range_warning(
                "lam(n=%d) = %g outside (0, %g)" % (bad[0], bad[1], cap)
            )

    # -- derived constants ---------------------------------------------------

    def gamma_cap(self):
        """Admissible upper bound for the scfpp step gamma.

        Defaults to 1/||A A*||; the alternative caps by the operators'
        uniform Lipschitz constant instead (both appear in the underlying
        estimates, and which one binds is ambiguous).
        """
        if self.gamma_bound_choice == "l_star":
            return 1.0 / estimate_norm_squared(self.A)
        ls = [c for c in (_lipschitz_constant(self.T), _lipschitz_constant(self.G))
              if c is not None]
        if not ls:
            raise ValidationError(
                "gamma_bound_choice='lipschitz' needs declared Lipschitz "
                "constants on T and G"
            )
        return 1.0 / max(ls)

    def demicontractive_k(self):
        ks = []
        for m in (self.U, self.T):
            k = _demicontractive_constant(m.declared_class)
            if k is None:
                raise ValidationError(
                    "%s must declare a demicontractive-type class" % (m.name or "map",)
                )
            ks.append(k)
        return max(ks)

    def synchronal_tau(self):
        """tau = mu (eta - mu L^2 / 2), from G's declared moduli."""
        eta = _strong_monotonicity(self.G)
        lip = _lipschitz_constant(self.G)
        return self.mu * (eta - self.mu * lip ** 2 / 2.0)


@dataclass
class StoppingRule:
    """Loop control: any enabled criterion stops the run.

    ``None`` disables a criterion.  ``residual_tol`` applies to the
    family-specific residual, ``stagnation_tol`` to the iterate change,
    ``target_tol`` to the distance from the reference solution.
    """

    max_iters: int
    residual_tol: float | None = None
    stagnation_tol: float | None = None
    target_tol: float | None = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValidationError("max_iters must be >= 1")
        for name in ("residual_tol", "stagnation_tol", "target_tol"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValidationError("%s must be >= 0" % name)


@dataclass
class TraceRecord:
    """One iteration snapshot.  Intermediate slots are family-specific:

    - sffpep/scfpep: z, w from the x block; u, r from the y block
    - scfpp/scfpp_adaptive: u is the adjoint-corrected point
    - synchronal_vip: u is the averaged iterate the update contracts around
    - extragradient: u, z are the two projected extrapolations, r the inner
      averaged point, w the cut anchor
    """

    n: int
    x: np.ndarray
    y: np.ndarray | None = None
    u: np.ndarray | None = None
    z: np.ndarray | None = None
    w: np.ndarray | None = None
    r: np.ndarray | None = None
    step: float | None = None
    residual_primary: float | None = None
    residual_coupling: float | None = None
    dist_to_target: float | None = None
    cut_count: int | None = None


@dataclass
class IterationTrace:
    family: str
    records: list
    stop_reason: str = "max_iters"
    intermediates: tuple = ()   # which of u/z/w/r this family fills

    @property
    def final(self):
        return self.records[-1]

    def iterates(self):
        return [r.x for r in self.records]

    def __len__(self):
        return len(self.records)
