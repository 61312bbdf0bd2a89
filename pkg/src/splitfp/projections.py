"""Projectable convex sets and metric projections.

Closed forms for boxes, halfspaces and balls; Dykstra's corrected cyclic
projection for intersections, with an analytic fast path when every member
of a one-dimensional intersection is an interval-like set.
"""

from dataclasses import dataclass

import numpy as np

from .spaces import DimensionMismatch, inner, norm

__all__ = [
    "ConvexBody",
    "WholeSpace",
    "Box",
    "Halfspace",
    "Ball",
    "Intersection",
    "project",
    "contains",
    "halfspace_from_distance_dominance",
    "check_projection_inequalities",
    "InfeasibleIntersection",
    "DykstraNoConvergence",
]


class InfeasibleIntersection(RuntimeError):
    """Dykstra's cycle gap stayed bounded away from zero: empty intersection."""


class DykstraNoConvergence(RuntimeError):
    """Dykstra did not reach the requested tolerance; carries the residual."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class ConvexBody:
    """Base class; concrete sets implement ``_project`` and ``dim``."""

    def project(self, x):
        return project(self, x)


@dataclass(frozen=True)
class WholeSpace(ConvexBody):
    dim: int

    def _project(self, x):
        return x.copy()


class Box(ConvexBody):
    """Axis-aligned box; +-inf entries make a side unbounded."""

    def __init__(self, lower, upper):
        lo = np.atleast_1d(np.asarray(lower, dtype=float))
        hi = np.atleast_1d(np.asarray(upper, dtype=float))
        if lo.shape != hi.shape:
            raise DimensionMismatch("box bounds differ in dimension")
        if np.any(lo > hi):
            raise ValueError("box lower bound exceeds upper bound")
        self.lower = lo.copy()
        self.upper = hi.copy()
        self.lower.flags.writeable = False
        self.upper.flags.writeable = False

    @property
    def dim(self):
        return self.lower.shape[0]

    def _project(self, x):
        return np.clip(x, self.lower, self.upper)

    def __repr__(self):
        return "Box(%s, %s)" % (self.lower.tolist(), self.upper.tolist())


class Halfspace(ConvexBody):
    """{z : <a, z> <= b}.  A zero normal is the whole space (requires b >= 0)."""

    def __init__(self, a, b):
        a = np.atleast_1d(np.asarray(a, dtype=float)).copy()
        a.flags.writeable = False
        self.a = a
        self.b = float(b)
        self._norm_sq = float(np.dot(a, a))
        if self._norm_sq == 0.0 and self.b < 0.0:
            raise ValueError("zero normal with negative offset describes the empty set")

    @property
    def dim(self):
        return self.a.shape[0]

    @property
    def is_whole_space(self):
        return self._norm_sq == 0.0

    def _project(self, x):
        if self.is_whole_space:
            return x.copy()
        slack = float(np.dot(self.a, x)) - self.b
        if slack <= 0.0:
            return x.copy()
        return x - (slack / self._norm_sq) * self.a

    def __repr__(self):
        return "Halfspace(a=%s, b=%s)" % (self.a.tolist(), self.b)


class Ball(ConvexBody):
    def __init__(self, center, radius):
        center = np.atleast_1d(np.asarray(center, dtype=float)).copy()
        center.flags.writeable = False
        self.center = center
        self.radius = float(radius)
        if self.radius < 0.0:
            raise ValueError("radius must be nonnegative")

    @property
    def dim(self):
        return self.center.shape[0]

    def _project(self, x):
        d = x - self.center
        dist = np.linalg.norm(d)
        if dist <= self.radius:
            return x.copy()
        return self.center + (self.radius / dist) * d

    def __repr__(self):
        return "Ball(center=%s, radius=%s)" % (self.center.tolist(), self.radius)


class Intersection(ConvexBody):
    def __init__(self, bodies):
        bodies = tuple(bodies)
        if not bodies:
            raise ValueError("intersection of an empty family is not represented")
        dims = {b.dim for b in bodies}
        if len(dims) != 1:
            raise DimensionMismatch("intersection members differ in dimension")
        self.bodies = bodies

    @property
    def dim(self):
        return self.bodies[0].dim

    def __repr__(self):
        return "Intersection(%d bodies)" % len(self.bodies)

    def _project(self, x):
        interval = _as_interval_1d(self)
        if interval is not None:
            lo, hi = interval
            if lo > hi:
                raise InfeasibleIntersection(
                    "1-D intersection is empty: [%g, %g]" % (lo, hi)
                )
            return np.clip(x, lo, hi)
        return _dykstra(self.bodies, x)


def _as_interval_1d(body):
    """Collapse a 1-D body made of boxes/halfspaces/balls to [lo, hi], or None.

    Intersections are flattened recursively.  Returns None when the body (or
    a member) is not interval-like or not one-dimensional.
    """
    if body.dim != 1:
        return None
    if isinstance(body, WholeSpace):
        return (-np.inf, np.inf)
    if isinstance(body, Box):
        return (body.lower[0], body.upper[0])
    if isinstance(body, Ball):
        return (body.center[0] - body.radius, body.center[0] + body.radius)
    if isinstance(body, Halfspace):
        if body.is_whole_space:
            return (-np.inf, np.inf)
        a, b = body.a[0], body.b
        return (b / a, np.inf) if a < 0 else (-np.inf, b / a)
    if isinstance(body, Intersection):
        lo, hi = -np.inf, np.inf
        for member in body.bodies:
            sub = _as_interval_1d(member)
            if sub is None:
                return None
            lo, hi = max(lo, sub[0]), min(hi, sub[1])
        return (lo, hi)
    return None


def _dykstra(bodies, x, tol=1e-12, max_sweeps=10000,
             infeasible_gap=1e-8, infeasible_patience=1000):
    """Dykstra's corrected cyclic projection onto an intersection.

    Convergence is judged by the in-sweep cycle gap: the largest move any
    single body projection makes during a sweep.  A small gap means the
    iterate is within tolerance of every member, hence feasible and (by
    Dykstra's correction bookkeeping) the metric projection.  On an empty
    intersection the sweep endpoint can freeze while the cycle keeps
    oscillating between the sets, so a gap that stays above
    ``infeasible_gap`` for ``infeasible_patience`` consecutive sweeps is
    declared infeasible.
    """
    m = len(bodies)
    y = x.astype(float).copy()
    corrections = [np.zeros_like(y) for _ in range(m)]
    stalled = 0
    gap = np.inf
    for _ in range(max_sweeps):
        gap = 0.0
        for i, body in enumerate(bodies):
            z = y - corrections[i]
            moved = body._project(z)
            corrections[i] = moved - z
            gap = max(gap, float(np.linalg.norm(moved - y)))
            y = moved
        if gap <= tol:
            return y
        if gap > infeasible_gap:
            stalled += 1
            if stalled >= infeasible_patience:
                raise InfeasibleIntersection(
                    "cycle gap %.3e stayed above %.1e for %d sweeps; "
                    "intersection looks empty" % (gap, infeasible_gap, stalled)
                )
        else:
            stalled = 0
    raise DykstraNoConvergence(
        "Dykstra stopped after %d sweeps with residual %.3e" % (max_sweeps, gap), gap
    )


def project(S, x):
    """Metric projection of ``x`` onto the convex body ``S``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape[0] != S.dim:
        raise DimensionMismatch(
            "point dimension %d does not match set dimension %d" % (x.shape[0], S.dim)
        )
    return S._project(x)


def contains(S, x, tol=1e-10):
    """Membership test via the projection: x in S iff project(S, x) == x."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return float(np.linalg.norm(project(S, x) - x)) <= tol


def halfspace_from_distance_dominance(near, far):
    """The set of points at least as close to ``near`` as to ``far``.

    {z : ||near - z|| <= ||far - z||} written as the halfspace
    {z : 2<far - near, z> <= ||far||^2 - ||near||^2}; the perpendicular
    bisector is the boundary.  Equal inputs give the whole space.
    """
    near = np.atleast_1d(np.asarray(near, dtype=float))
    far = np.atleast_1d(np.asarray(far, dtype=float))
    if near.shape != far.shape:
        raise DimensionMismatch("near/far dimension mismatch")
    if np.array_equal(near, far):
        return WholeSpace(near.shape[0])
    a = 2.0 * (far - near)
    b = float(np.dot(far, far) - np.dot(near, near))
    return Halfspace(a, b)


@dataclass
class ProjectionInequalityReport:
    """Both sides of the projection inequalities at one (x, y) pair."""

    shrink_lhs: float          # ||x - P(x)||^2
    shrink_rhs: float          # ||y - x||^2 - ||y - P(x)||^2
    shrink_holds: bool
    anchored_checked: bool     # hypothesis <x - y, x - P(x)> <= 0 held
    anchored_lhs: float | None  # ||P(x) - x||
    anchored_rhs: float | None  # ||P(x) - y||
    anchored_holds: bool | None

    @property
    def passed(self):
        if not self.shrink_holds:
            return False
        return self.anchored_holds is not False


def check_projection_inequalities(S, x, y, slack=1e-9):
    """Check the two metric-projection inequalities at (x, y) with y in S.

    The first states ||x - P(x)||^2 <= ||y - x||^2 - ||y - P(x)||^2 for any
    y in S.  The second, ||P(x) - x|| <= ||P(x) - y||, is conditional on
    <x - y, x - P(x)> <= 0 and is flagged as skipped when that inner-product
    hypothesis fails at (x, y).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if not contains(S, y):
        raise ValueError("y is not a member of S (projection moves it)")
    px = project(S, x)
    lhs = norm(x - px) ** 2
    rhs = norm(y - x) ** 2 - norm(y - px) ** 2
    shrink_holds = lhs <= rhs + slack
    hypothesis = inner(x - y, x - px) <= slack
    if hypothesis:
        a_lhs = norm(px - x)
        a_rhs = norm(px - y)
        return ProjectionInequalityReport(
            lhs, rhs, shrink_holds, True, a_lhs, a_rhs, a_lhs <= a_rhs + slack
        )
    return ProjectionInequalityReport(lhs, rhs, shrink_holds, False, None, None, None)
