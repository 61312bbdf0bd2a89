"""Nonlinear-operator taxonomy, combinators, named example operators, and
sampling-based class verifiers.

An operator is a :class:`FixedPointMap`: an evaluation rule together with a
domain, a declared regularity class, and (when known) fixed points.  The
class taxonomy covers contractions through total quasi-asymptotically
nonexpansive maps; each class knows its defining inequality, and
:func:`verify_class` falsification-tests a declared class by deterministic
sampling.  The sampler is a fixed 64-bit linear congruential generator so
reports are bit-reproducible across platforms.
"""

import math
from dataclasses import dataclass

import numpy as np

from .projections import Ball, Box, WholeSpace, contains, project
from .rules import Piecewise1D, Rational1D
from .spaces import inner, norm

__all__ = [
    "SequenceSpec",
    "Gauge",
    "Contraction",
    "Nonexpansive",
    "QuasiNonexpansive",
    "FirmlyQuasiNonexpansive",
    "Demicontractive",
    "StrictlyPseudocontractive",
    "Directed",
    "AsymptoticallyNonexpansive",
    "AsymptoticallyQuasiNonexpansive",
    "TotalAsymptoticallyNonexpansive",
    "TotalQuasiAsymptoticallyNonexpansive",
    "TotalAsymStrictPseudocontraction",
    "Lipschitzian",
    "UniformlyLipschitzian",
    "StronglyMonotone",
    "FixedPointMap",
    "map_from_rule",
    "power_apply",
    "power_map",
    "relax",
    "convex_combine",
    "verify_class",
    "check_power_inequality_equivalences",
    "check_strong_monotonicity_of_complement",
    "operator_catalog",
    "scaled_negation",
    "shift_square_ball_map",
    "DomainEscape",
    "ClassMismatch",
]

_FIXED_POINT_TOL = 1e-9


class DomainEscape(RuntimeError):
    """An iterate left the operator's domain; names the offending step."""


class ClassMismatch(ValueError):
    """Operation requires a different declared operator class."""


# ---------------------------------------------------------------------------
# parameter sequences and gauge functions


class SequenceSpec:
    """Evaluable scalar sequence: constant, table with tail, or registry formula.

    Formulas are drawn from a fixed registry of closed forms, all evaluable
    at every n >= 0 (shifted where the textbook form would divide by zero).
    """

    _FORMULAS = {
        "1/(n+1)": lambda n: 1.0 / (n + 1),
        "1/(n+2)": lambda n: 1.0 / (n + 2),
        "1/(n+1)^2": lambda n: 1.0 / (n + 1) ** 2,
        "1+1/(n+1)^2": lambda n: 1.0 + 1.0 / (n + 1) ** 2,
    }

    def __init__(self, kind, constant=None, values=None, tail=None, formula=None):
        self.kind = kind
        self.constant_value = constant
        self.values = tuple(float(v) for v in values) if values is not None else None
        self.tail = float(tail) if tail is not None else None
        self.formula = formula
        if kind == "constant":
            if constant is None:
                raise ValueError("constant sequence needs a value")
        elif kind == "table":
            if not self.values or self.tail is None:
                raise ValueError("table sequence needs values and a tail")
        elif kind == "formula":
            if formula not in self._FORMULAS:
                raise ValueError(
                    "unknown formula %r; registry: %s"
                    % (formula, sorted(self._FORMULAS))
                )
        else:
            raise ValueError("unknown sequence kind %r" % kind)

    @classmethod
    def const(cls, c):
        return cls("constant", constant=float(c))

    @classmethod
    def table(cls, values, tail):
        return cls("table", values=values, tail=tail)

    @classmethod
    def from_formula(cls, name):
        return cls("formula", formula=name)

    def __call__(self, n):
        if n < 0:
            raise ValueError("sequence index must be >= 0")
        if self.kind == "constant":
            return self.constant_value
        if self.kind == "table":
            return self.values[n] if n < len(self.values) else self.tail
        return self._FORMULAS[self.formula](n)

    def eval_decimal(self, n):
        """Evaluate in decimal arithmetic under the active context."""
        from decimal import Decimal

        if n < 0:
            raise ValueError("sequence index must be >= 0")
        if self.kind == "constant":
            return Decimal(self.constant_value)
        if self.kind == "table":
            return Decimal(self.values[n] if n < len(self.values) else self.tail)
        one = Decimal(1)
        if self.formula == "1/(n+1)":
            return one / (n + 1)
        if self.formula == "1/(n+2)":
            return one / (n + 2)
        if self.formula == "1/(n+1)^2":
            return one / Decimal((n + 1) ** 2)
        return one + one / Decimal((n + 1) ** 2)

    def to_config(self):
        if self.kind == "constant":
            return {"constant": self.constant_value}
        if self.kind == "table":
            return {"table": list(self.values), "tail": self.tail}
        return {"formula": self.formula}

    @classmethod
    def from_config(cls, doc):
        if isinstance(doc, (int, float)):
            return cls.const(doc)
        if "constant" in doc:
            return cls.const(doc["constant"])
        if "table" in doc:
            return cls.table(doc["table"], doc["tail"])
        return cls.from_formula(doc["formula"])

    def __repr__(self):
        return "SequenceSpec(%r)" % (self.to_config(),)


class Gauge:
    """Strictly increasing continuous gauge with gauge(0) = 0.

    Restricted to the registry {t, t^2, c*t^2}; the quadratic gauge is the
    only one the verified inequalities ever need.
    """

    def __init__(self, kind="t^2", c=1.0):
        if kind not in ("t", "t^2", "c*t^2"):
            raise ValueError("gauge registry: 't', 't^2', 'c*t^2'")
        if kind == "c*t^2" and c <= 0:
            raise ValueError("gauge scale must be positive")
        self.kind = kind
        self.c = float(c)

    def __call__(self, t):
        if self.kind == "t":
            return t
        if self.kind == "t^2":
            return t * t
        return self.c * t * t

    def __repr__(self):
        return "Gauge(%r, c=%r)" % (self.kind, self.c)


_ZERO = SequenceSpec.const(0.0)
_ONE = SequenceSpec.const(1.0)


# ---------------------------------------------------------------------------
# the class taxonomy


def _check_unit_interval(k, lo_open, name):
    if not (k > 0.0 if lo_open else k >= 0.0) or not k < 1.0:
        bracket = "(0,1)" if lo_open else "[0,1)"
        raise ValueError("%s requires k in %s, got %r" % (name, bracket, k))


@dataclass(frozen=True)
class Contraction:
    k: float

    def __post_init__(self):
        _check_unit_interval(self.k, True, "Contraction")


@dataclass(frozen=True)
class Nonexpansive:
    pass


@dataclass(frozen=True)
class QuasiNonexpansive:
    pass


@dataclass(frozen=True)
class FirmlyQuasiNonexpansive:
    pass


@dataclass(frozen=True)
class Demicontractive:
    k: float

    def __post_init__(self):
        _check_unit_interval(self.k, False, "Demicontractive")


@dataclass(frozen=True)
class StrictlyPseudocontractive:
    k: float

    def __post_init__(self):
        _check_unit_interval(self.k, False, "StrictlyPseudocontractive")


@dataclass(frozen=True)
class Directed:
    pass


@dataclass(frozen=True)
class AsymptoticallyNonexpansive:
    k_seq: SequenceSpec

    def __post_init__(self):
        _check_at_least_one(self.k_seq, "AsymptoticallyNonexpansive k_n")


@dataclass(frozen=True)
class AsymptoticallyQuasiNonexpansive:
    t_seq: SequenceSpec

    def __post_init__(self):
        _check_at_least_one(self.t_seq, "AsymptoticallyQuasiNonexpansive t_n")


@dataclass(frozen=True)
class TotalAsymptoticallyNonexpansive:
    v_seq: SequenceSpec
    mu_seq: SequenceSpec
    gauge: Gauge

    def __post_init__(self):
        _check_nonnegative(self.v_seq, "v_n")
        _check_nonnegative(self.mu_seq, "mu_n")


@dataclass(frozen=True)
class TotalQuasiAsymptoticallyNonexpansive:
    v_seq: SequenceSpec
    mu_seq: SequenceSpec
    gauge: Gauge
    gauge_bound_m: float | None = None      # M with gauge(k) <= gauge(M) + M* k^2
    gauge_bound_mstar: float | None = None

    def __post_init__(self):
        _check_nonnegative(self.v_seq, "v_n")
        _check_nonnegative(self.mu_seq, "mu_n")


@dataclass(frozen=True)
class TotalAsymStrictPseudocontraction:
    k: float
    mu_seq: SequenceSpec
    xi_seq: SequenceSpec
    gauge: Gauge

    def __post_init__(self):
        _check_unit_interval(self.k, False, "TotalAsymStrictPseudocontraction")
        _check_nonnegative(self.mu_seq, "mu_n")
        _check_nonnegative(self.xi_seq, "xi_n")


@dataclass(frozen=True)
class Lipschitzian:
    K: float

    def __post_init__(self):
        if self.K <= 0:
            raise ValueError("Lipschitz constant must be positive")


@dataclass(frozen=True)
class UniformlyLipschitzian:
    K: float

    def __post_init__(self):
        if self.K <= 0:
            raise ValueError("Lipschitz constant must be positive")


@dataclass(frozen=True)
class StronglyMonotone:
    eta: float

    def __post_init__(self):
        if self.eta <= 0:
            raise ValueError("strong-monotonicity modulus must be positive")


# class constraints quantify over iterate powers, which start at n = 1

def _check_nonnegative(seq, name, upto=50):
    for n in range(1, upto + 1):
        if seq(n) < 0:
            raise ValueError("%s must be nonnegative (n=%d)" % (name, n))


def _check_at_least_one(seq, name, upto=50):
    for n in range(1, upto + 1):
        if seq(n) < 1.0:
            raise ValueError("%s must be >= 1 (n=%d gives %r)" % (name, n, seq(n)))


# ---------------------------------------------------------------------------
# fixed-point maps and combinators


class FixedPointMap:
    """A nonlinear map with domain, declared class, and known fixed points.

    ``eval_fn`` takes and returns 1-D float arrays.  ``rule``, when present,
    is the portable scalar update rule the map was built from (used by the
    configuration format and the high-precision oracle).  ``extra_classes``
    lists additional regularity declarations beyond the primary one, e.g.
    a Lipschitz constant alongside a strong-monotonicity modulus.
    """

    def __init__(self, eval_fn, domain, declared_class=None,
                 known_fixed_points=(), name=None, rule=None, extra_classes=()):
        self.eval_fn = eval_fn
        self.domain = domain
        self.declared_class = declared_class
        self.name = name
        self.rule = rule
        self.extra_classes = tuple(extra_classes)
        pts = []
        for p in known_fixed_points:
            p = np.atleast_1d(np.asarray(p, dtype=float))
            drift = norm(self(p) - p)
            if drift > _FIXED_POINT_TOL:
                raise ValueError(
                    "claimed fixed point %s moves by %.3e under the map"
                    % (p.tolist(), drift)
                )
            pts.append(p)
        self.known_fixed_points = tuple(pts)

    @property
    def dim(self):
        return self.domain.dim

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return np.atleast_1d(np.asarray(self.eval_fn(x), dtype=float))

    def __repr__(self):
        return "FixedPointMap(%s)" % (self.name or "unnamed")


def map_from_rule(rule, domain, declared_class=None, known_fixed_points=(),
                  name=None, extra_classes=()):
    """Wrap a scalar rule as a one-dimensional :class:`FixedPointMap`."""

    def eval_fn(x):
        return np.array([rule(float(x[0]))])

    return FixedPointMap(eval_fn, domain, declared_class, known_fixed_points,
                         name=name, rule=rule, extra_classes=extra_classes)


def power_apply(T, n, x, check_domain=True):
    """n-fold composition T(T(...T(x))).

    Cost is at most n evaluations; composition stops early once an iterate
    is bit-exactly fixed (further applications are the identity on it).
    With ``check_domain`` the current point is required to lie in T's domain
    before every application, and the offending step is named on escape.
    """
    if n < 1:
        raise ValueError("power requires n >= 1")
    cur = np.atleast_1d(np.asarray(x, dtype=float))
    for i in range(n):
        if check_domain and not contains(T.domain, cur, tol=1e-9):
            raise DomainEscape(
                "iterate left the domain before application %d of %d: %s"
                % (i + 1, n, cur.tolist())
            )
        nxt = T(cur)
        if np.array_equal(nxt, cur):
            return nxt
        cur = nxt
    return cur


def power_map(T, n, name=None):
    """The n-th iterate power of T as a map in its own right."""
    return FixedPointMap(
        lambda x: power_apply(T, n, x, check_domain=False),
        T.domain,
        known_fixed_points=T.known_fixed_points,
        name=name or ("%s^%d" % (T.name or "T", n)),
    )


def _relax_rational(r, alpha):
    # (1-a) x + a p(x)/q(x)  ==  ((1-a) x q(x) + a p(x)) / q(x)
    shifted = [0.0] + list(r.den)
    width = max(len(shifted), len(r.num))
    num = [0.0] * width
    for i, c in enumerate(shifted):
        num[i] += (1.0 - alpha) * c
    for i, c in enumerate(r.num):
        num[i] += alpha * c
    return Rational1D(num, r.den)


def _relax_rule(rule, alpha):
    if isinstance(rule, Rational1D):
        return _relax_rational(rule, alpha)
    if isinstance(rule, Piecewise1D):
        return Piecewise1D(
            rule.breakpoint,
            _relax_rational(rule.left, alpha),
            _relax_rational(rule.right, alpha),
            rule.left_closed,
        )
    return None


def relax(T, alpha):
    """Averaged map x -> (1-alpha) x + alpha T(x) for alpha in (0, 1].

    Preserves the fixed-point set; stays quasi-nonexpansive when T is.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError("relaxation weight must lie in (0, 1]")
    if alpha == 1.0:
        return T
    declared = (
        QuasiNonexpansive()
        if isinstance(T.declared_class, QuasiNonexpansive)
        else None
    )
    rule = _relax_rule(T.rule, alpha) if T.rule is not None else None
    return FixedPointMap(
        lambda x: (1.0 - alpha) * x + alpha * T(x),
        T.domain,
        declared_class=declared,
        known_fixed_points=T.known_fixed_points,
        name="relax(%s, %g)" % (T.name or "T", alpha),
        rule=rule,
    )


def convex_combine(maps, weights):
    """Weighted average x -> sum_i w_i T_i(x) of maps sharing a domain dim.

    Declared quasi-nonexpansive when every input is and a common fixed
    point survives; the surviving common fixed points are re-registered.
    """
    maps = list(maps)
    if not maps:
        raise ValueError("need at least one map")
    weights = [float(w) for w in weights]
    if len(weights) != len(maps):
        raise ValueError("weights and maps differ in length")
    if any(w <= 0 for w in weights):
        raise ValueError("weights must be positive")
    if abs(sum(weights) - 1.0) > 1e-12:
        raise ValueError("weights must sum to 1 within 1e-12")
    dims = {m.dim for m in maps}
    if len(dims) != 1:
        raise ValueError("maps live in different dimensions")
    if len(maps) == 1:
        return maps[0]

    def eval_fn(x):
        acc = weights[0] * maps[0](x)
        for w, m in zip(weights[1:], maps[1:]):
            acc = acc + w * m(x)
        return acc

    common = []
    seen = set()
    for m in maps:
        for p in m.known_fixed_points:
            key = tuple(p.tolist())
            if key in seen:
                continue
            seen.add(key)
            if all(norm(other(p) - p) <= _FIXED_POINT_TOL for other in maps):
                common.append(p)
    all_quasi = all(isinstance(m.declared_class, QuasiNonexpansive) for m in maps)
    declared = QuasiNonexpansive() if (all_quasi and common) else None
    return FixedPointMap(
        eval_fn,
        maps[0].domain,
        declared_class=declared,
        known_fixed_points=common,
        name="combine(%s)" % ", ".join(m.name or "T" for m in maps),
    )


# ---------------------------------------------------------------------------
# deterministic sampling


class _Lcg:
    """64-bit linear congruential generator (Knuth MMIX constants).

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64;
    doubles take the top 53 bits.  Fixed here so verification reports are
    bit-reproducible across languages and platforms.
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed):
        self.state = seed & self.MASK

    def next_u64(self):
        self.state = (self.A * self.state + self.C) & self.MASK
        return self.state

    def next_double(self):
        return (self.next_u64() >> 11) * (2.0 ** -53)


def _sample_interval(lo, hi, u, scale):
    lo_c = max(lo, -scale)
    hi_c = min(hi, scale)
    if lo_c > hi_c:
        # feasible region lies outside the default window: recenter on it
        if lo > scale:
            lo_c, hi_c = lo, min(hi, lo + 2 * scale)
        else:
            lo_c, hi_c = max(lo, hi - 2 * scale), hi
    return lo_c + u * (hi_c - lo_c)


def sample_point(body, lcg, scale=10.0):
    """Draw a point of ``body`` from the LCG stream.

    Boxes sample coordinates uniformly inside bounds clipped to
    [-scale, scale]; other bodies sample that window and project, so every
    returned point is a member.
    """
    d = body.dim
    if isinstance(body, Box):
        return np.array(
            [
                _sample_interval(body.lower[i], body.upper[i], lcg.next_double(), scale)
                for i in range(d)
            ]
        )
    if isinstance(body, WholeSpace):
        return np.array([-scale + 2 * scale * lcg.next_double() for _ in range(d)])
    raw = np.array([-scale + 2 * scale * lcg.next_double() for _ in range(d)])
    return project(body, raw)


_NEAR_OFFSETS = (1e-1, 1e-2, 1e-3, 1e-4)


def _sample_pair(body, lcg, index, scale):
    """Alternate far pairs (independent draws) with near pairs (small offsets).

    Near pairs probe local Lipschitz-type violations that independent
    uniform draws almost never hit.
    """
    x = sample_point(body, lcg, scale)
    if index % 2 == 0:
        return x, sample_point(body, lcg, scale)
    delta = _NEAR_OFFSETS[(index // 2) % len(_NEAR_OFFSETS)] * scale
    direction = np.array([2.0 * lcg.next_double() - 1.0 for _ in range(body.dim)])
    nd = np.linalg.norm(direction)
    if nd == 0.0:
        direction = np.zeros(body.dim)
        direction[0] = 1.0
        nd = 1.0
    z = project(body, x + (delta / nd) * direction)
    return x, z


# ---------------------------------------------------------------------------
# class verification


@dataclass
class CheckRecord:
    index: int
    point: list
    partner: list | None   # second point of a pair, or the fixed point used
    n: int | None          # iterate power for asymptotic classes
    lhs: float
    rhs: float
    passed: bool

    def to_line(self):
        status = "PASS" if self.passed else "FAIL"
        partner = "" if self.partner is None else " partner=%s" % (self.partner,)
        power = "" if self.n is None else " n=%d" % self.n
        return "sample=%d point=%s%s%s lhs=%.17g rhs=%.17g %s" % (
            self.index, self.point, partner, power, self.lhs, self.rhs, status
        )


@dataclass
class ClassReport:
    operator: str
    claimed: str
    samples: int
    seed: int
    records: list
    violations: list

    @property
    def passed(self):
        return not self.violations

    def to_text(self):
        lines = [
            "operator=%s claimed=%s samples=%d seed=%d verdict=%s"
            % (
                self.operator,
                self.claimed,
                self.samples,
                self.seed,
                "PASS" if self.passed else "FAIL (%d violations)" % len(self.violations),
            )
        ]
        lines.extend(r.to_line() for r in self.records)
        return "\n".join(lines) + "\n"


def _needs_fixed_points(cls):
    return isinstance(
        cls,
        (
            QuasiNonexpansive,
            FirmlyQuasiNonexpansive,
            Demicontractive,
            Directed,
            AsymptoticallyQuasiNonexpansive,
            TotalQuasiAsymptoticallyNonexpansive,
        ),
    )


def _is_pairwise(cls):
    return isinstance(
        cls,
        (
            Contraction,
            Nonexpansive,
            StrictlyPseudocontractive,
            Lipschitzian,
            UniformlyLipschitzian,
            StronglyMonotone,
            AsymptoticallyNonexpansive,
            TotalAsymptoticallyNonexpansive,
            TotalAsymStrictPseudocontraction,
        ),
    )


def _is_asymptotic(cls):
    return isinstance(
        cls,
        (
            AsymptoticallyNonexpansive,
            AsymptoticallyQuasiNonexpansive,
            TotalAsymptoticallyNonexpansive,
            TotalQuasiAsymptoticallyNonexpansive,
            TotalAsymStrictPseudocontraction,
            UniformlyLipschitzian,
        ),
    )


def _pair_sides(cls, x, z, tx, tz, n):
    """(lhs, rhs) of the defining inequality for two-point classes at power n."""
    if isinstance(cls, Contraction):
        return norm(tx - tz), cls.k * norm(x - z)
    if isinstance(cls, Nonexpansive):
        return norm(tx - tz), norm(x - z)
    if isinstance(cls, Lipschitzian) or isinstance(cls, UniformlyLipschitzian):
        return norm(tx - tz), cls.K * norm(x - z)
    if isinstance(cls, StrictlyPseudocontractive):
        return (
            norm(tx - tz) ** 2,
            norm(x - z) ** 2 + cls.k * norm((x - tx) - (z - tz)) ** 2,
        )
    if isinstance(cls, StronglyMonotone):
        # sign flipped so the check is uniformly lhs <= rhs
        return cls.eta * norm(x - z) ** 2, inner(tx - tz, x - z)
    if isinstance(cls, AsymptoticallyNonexpansive):
        return norm(tx - tz), cls.k_seq(n) * norm(x - z)
    if isinstance(cls, TotalAsymptoticallyNonexpansive):
        return (
            norm(tx - tz) ** 2,
            norm(x - z) ** 2 + cls.v_seq(n) * cls.gauge(norm(x - z)) + cls.mu_seq(n),
        )
    if isinstance(cls, TotalAsymStrictPseudocontraction):
        return (
            norm(tx - tz) ** 2,
            norm(x - z) ** 2
            + cls.k * norm((x - tx) - (z - tz)) ** 2
            + cls.mu_seq(n) * cls.gauge(norm(x - z))
            + cls.xi_seq(n),
        )
    raise ClassMismatch("unsupported pair class %r" % (cls,))


def _fix_sides(cls, x, p, tx, n):
    """(lhs, rhs) for classes quantified over the fixed-point set."""
    if isinstance(cls, QuasiNonexpansive):
        return norm(tx - p), norm(x - p)
    if isinstance(cls, FirmlyQuasiNonexpansive):
        return norm(tx - p) ** 2, norm(x - p) ** 2 - norm(tx - x) ** 2
    if isinstance(cls, Demicontractive):
        return norm(tx - p) ** 2, norm(x - p) ** 2 + cls.k * norm(tx - x) ** 2
    if isinstance(cls, Directed):
        return inner(p - tx, x - tx), 0.0
    if isinstance(cls, AsymptoticallyQuasiNonexpansive):
        return norm(tx - p) ** 2, cls.t_seq(n) * norm(x - p) ** 2
    if isinstance(cls, TotalQuasiAsymptoticallyNonexpansive):
        return (
            norm(tx - p) ** 2,
            norm(x - p) ** 2 + cls.v_seq(n) * cls.gauge(norm(x - p)) + cls.mu_seq(n),
        )
    raise ClassMismatch("unsupported fixed-point class %r" % (cls,))


def _iterates(T, x, n_max):
    """x, Tx, T^2 x, ..., T^{n_max} x computed incrementally."""
    out = [np.atleast_1d(np.asarray(x, dtype=float))]
    for _ in range(n_max):
        out.append(T(out[-1]))
    return out


def verify_class(T, claimed, samples=1000, seed=1, slack=1e-9, n_max=20,
                 scale=10.0, extra_points=(), extra_pairs=()):
    """Falsification-test a declared operator class by deterministic sampling.

    Draws ``samples`` points (or point pairs) from T's domain with the fixed
    LCG seeded by ``seed`` and checks the defining inequality of ``claimed``
    at each, allowing scale-aware slack ``slack * (1 + |rhs|)``.  Asymptotic
    classes are checked at iterate powers n = 1..``n_max``.  ``extra_points``
    / ``extra_pairs`` are prepended verbatim, for analytically known
    witnesses.  One record per sample is kept, carrying the worst-margin
    instance; the report lists every violating sample with both sides.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    pairwise = _is_pairwise(claimed)
    asymptotic = _is_asymptotic(claimed)
    if _needs_fixed_points(claimed) and not T.known_fixed_points:
        raise ClassMismatch(
            "class %r quantifies over Fix(T) but the operator declares none"
            % (claimed,)
        )
    lcg = _Lcg(seed)
    powers = range(1, n_max + 1) if asymptotic else (1,)

    tasks = []
    if pairwise:
        for pair in extra_pairs:
            x = np.atleast_1d(np.asarray(pair[0], dtype=float))
            z = np.atleast_1d(np.asarray(pair[1], dtype=float))
            tasks.append((x, z))
        for i in range(samples):
            tasks.append(_sample_pair(T.domain, lcg, i, scale))
    else:
        for pt in extra_points:
            tasks.append((np.atleast_1d(np.asarray(pt, dtype=float)), None))
        for i in range(samples):
            tasks.append((sample_point(T.domain, lcg, scale), None))

    records = []
    for idx, (x, z) in enumerate(tasks):
        worst = None
        if pairwise:
            xs = _iterates(T, x, max(powers))
            zs = _iterates(T, z, max(powers))
            for n in powers:
                lhs, rhs = _pair_sides(claimed, x, z, xs[n], zs[n], n)
                margin = lhs - rhs
                if worst is None or margin > worst[0]:
                    worst = (margin, lhs, rhs, n)
        else:
            xs = _iterates(T, x, max(powers))
            for p in T.known_fixed_points:
                for n in powers:
                    lhs, rhs = _fix_sides(claimed, x, p, xs[n], n)
                    margin = lhs - rhs
                    if worst is None or margin > worst[0]:
                        worst = (margin, lhs, rhs, n, p)
        margin, lhs, rhs = worst[0], worst[1], worst[2]
        n_used = worst[3] if asymptotic else None
        partner = (
            z.tolist()
            if pairwise
            else (worst[4].tolist() if len(worst) > 4 else None)
        )
        ok = margin <= slack * (1.0 + abs(rhs))
        records.append(
            CheckRecord(idx, x.tolist(), partner, n_used, lhs, rhs, ok)
        )
    violations = [r for r in records if not r.passed]
    return ClassReport(
        T.name or "unnamed",
        repr(claimed),
        samples,
        seed,
        records,
        violations,
    )


# ---------------------------------------------------------------------------
# inequality oracles used by the test suite


class _SeqShift:
    """v_n = t_n - 1 adapter for asymptotically quasi-nonexpansive maps."""

    def __init__(self, t_seq):
        self.t_seq = t_seq

    def __call__(self, n):
        return self.t_seq(n) - 1.0


def _total_quasi_params(cls):
    """View a declared class as total quasi-asymptotically nonexpansive."""
    if isinstance(cls, TotalQuasiAsymptoticallyNonexpansive):
        return cls.v_seq, cls.mu_seq, cls.gauge
    if isinstance(cls, QuasiNonexpansive):
        return _ZERO, _ZERO, Gauge("t^2")
    if isinstance(cls, AsymptoticallyQuasiNonexpansive):
        return _SeqShift(cls.t_seq), _ZERO, Gauge("t^2")
    raise ClassMismatch(
        "operator must be (total quasi-)asymptotically nonexpansive or "
        "quasi-nonexpansive, got %r" % (cls,)
    )


@dataclass
class PowerInequalityReport:
    """The three equivalent inequalities evaluated at one (x, y, n) triple."""

    distance_lhs: float
    distance_rhs: float
    distance_holds: bool
    forward_lhs: float
    forward_rhs: float
    forward_holds: bool
    backward_lhs: float
    backward_rhs: float
    backward_holds: bool

    @property
    def implication_ok(self):
        """Whenever the distance form holds, the two inner-product forms do."""
        if not self.distance_holds:
            return True
        return self.forward_holds and self.backward_holds


def check_power_inequality_equivalences(G, y, x, n, slack=1e-9):
    """Evaluate the three equivalent iterate-power inequalities at (x, y, n).

    ``y`` must be a fixed point of G and G must declare a
    (total quasi-)asymptotically nonexpansive class.  Returns a report whose
    ``implication_ok`` asserts the equivalence direction testable at a single
    sample: the distance form implies both inner-product forms.
    """
    v_seq, mu_seq, gauge = _total_quasi_params(G.declared_class)
    y = np.atleast_1d(np.asarray(y, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if norm(G(y) - y) > _FIXED_POINT_TOL:
        raise ValueError("y is not a fixed point of G")
    gx = power_apply(G, n, x, check_domain=False)
    vn, mun = v_seq(n), mu_seq(n)
    bump = vn * gauge(norm(x - y)) + mun
    d_lhs = norm(gx - y) ** 2
    d_rhs = norm(x - y) ** 2 + bump
    f_lhs = 2.0 * inner(x - gx, x - y)
    f_rhs = norm(gx - x) ** 2 - bump
    b_lhs = 2.0 * inner(x - gx, y - gx)
    b_rhs = norm(gx - x) ** 2 + bump
    tol = slack * (1.0 + abs(d_rhs))
    return PowerInequalityReport(
        d_lhs, d_rhs, d_lhs <= d_rhs + tol,
        f_lhs, f_rhs, f_lhs >= f_rhs - tol,
        b_lhs, b_rhs, b_lhs <= b_rhs + tol,
    )


@dataclass
class MonotonicityReport:
    samples: int
    seed: int
    modulus: float
    violations: list

    @property
    def passed(self):
        return not self.violations


def check_strong_monotonicity_of_complement(f, samples=1000, seed=1, slack=1e-9,
                                            scale=10.0):
    """Check that (I - f) is (1-k)-strongly monotone for a declared contraction.

    Samples pairs (w, z) and tests
    <(I-f)w - (I-f)z, w - z>  >=  (1-k) ||w - z||^2.
    """
    if not isinstance(f.declared_class, Contraction):
        raise ClassMismatch("operator must declare Contraction(k)")
    k = f.declared_class.k
    lcg = _Lcg(seed)
    violations = []
    for i in range(samples):
        w, z = _sample_pair(f.domain, lcg, i, scale)
        lhs = inner((w - f(w)) - (z - f(z)), w - z)
        rhs = (1.0 - k) * norm(w - z) ** 2
        if lhs < rhs - slack * (1.0 + abs(rhs)):
            violations.append((i, w.tolist(), z.tolist(), lhs, rhs))
    return MonotonicityReport(samples, seed, 1.0 - k, violations)


# ---------------------------------------------------------------------------
# named example operators


def scaled_negation(dim=3):
    """x -> -(5/2) x: demicontractive with least constant 3/7, not quasi-nonexpansive."""
    return FixedPointMap(
        lambda x: -2.5 * x,
        WholeSpace(dim),
        declared_class=Demicontractive(3.0 / 7.0),
        known_fixed_points=(np.zeros(dim),),
        name="scaledNeg",
    )


def shift_square_ball_map(dim=4):
    """(x1, x2, ..., xd) -> (0, x1^2, a2 x2, ..., a_{d-1} x_{d-1}) on the unit ball.

    The damping factors multiply to 1/2, making the iterate Lipschitz
    constants k_n = 2 * prod(a_2..a_n) decrease to 1: asymptotically
    nonexpansive but not nonexpansive.
    """
    if dim < 3:
        raise ValueError("needs dimension >= 3")
    a = (0.5) ** (1.0 / (dim - 2))
    factors = np.full(dim - 2, a)

    def eval_fn(x):
        out = np.zeros_like(x)
        out[1] = x[0] ** 2
        out[2:] = factors * x[1:-1]
        return out

    ks = [2.0]
    running = 2.0
    for f in factors:
        running *= f
        ks.append(max(running, 1.0))
    k_seq = SequenceSpec.table([1.0] + ks, tail=1.0)  # index 0 unused; powers start at 1
    return FixedPointMap(
        eval_fn,
        Ball(np.zeros(dim), 1.0),
        declared_class=AsymptoticallyNonexpansive(k_seq),
        known_fixed_points=(np.zeros(dim),),
        name="ballMap",
    )


def _sine_shrink(x):
    v = float(x[0])
    if v == 0.0:
        return np.array([0.0])
    return np.array([(2.0 / 3.0) * v * math.sin(1.0 / v)])


def operator_catalog():
    """The named example operators with domains, classes, and fixed points."""
    nonneg = Box([0.0], [np.inf])
    cat = {}
    cat["heDu"] = map_from_rule(
        Rational1D([2.0, 0.0, 1.0], [1.0, 1.0]), nonneg,
        declared_class=QuasiNonexpansive(), known_fixed_points=([2.0],),
        name="heDu",
    )
    cat["bigU"] = map_from_rule(
        Rational1D([5.0, 0.0, 1.0], [1.0, 1.0]), nonneg,
        declared_class=QuasiNonexpansive(), known_fixed_points=([5.0],),
        name="bigU",
    )
    cat["smallS"] = map_from_rule(
        Rational1D([5.0, 1.0], [5.0]), nonneg,
        declared_class=QuasiNonexpansive(), known_fixed_points=([1.25],),
        name="smallS",
    )
    cat["wqT"] = map_from_rule(
        Rational1D([2.0, 1.0], [3.0]), nonneg,
        declared_class=QuasiNonexpansive(), known_fixed_points=([1.0],),
        name="wqT",
    )
    # piecewise rule kept exactly as published: the zero branch covers
    # (-inf, 1], the rational branch (1, inf); 0 is the registered fixed
    # point, 1 the algorithmic target approached from above
    cat["wqU"] = map_from_rule(
        Piecewise1D(1.0, Rational1D([0.0], [1.0]), Rational1D([0.0, 2.0], [1.0, 1.0])),
        nonneg,
        declared_class=QuasiNonexpansive(), known_fixed_points=([0.0],),
        name="wqU",
    )
    cat["scaledNeg"] = scaled_negation()
    cat["ballMap"] = shift_square_ball_map()
    cat["browderPetryshyn"] = FixedPointMap(
        _sine_shrink, Box([-1.0], [1.0]),
        declared_class=Demicontractive(0.0), known_fixed_points=([0.0],),
        name="browderPetryshyn",
    )
    cat["identity"] = map_from_rule(
        Rational1D([0.0, 1.0], [1.0]), WholeSpace(1),
        declared_class=Nonexpansive(), known_fixed_points=([0.0],),
        name="identity",
    )
    return cat
