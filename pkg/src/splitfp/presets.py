"""Named, self-contained solver configurations with pinned expected values.

Each entry reproduces one of the bundled reference tables or exercises one
solver family end to end.  Expected rows carry a provenance tag:
``tabulated`` values are lifted verbatim from the reference tables,
``derived`` values were computed with an independent oracle (exact
rationals, brute force, or the high-precision re-execution).

Two of the tabulated configurations deliberately sit outside the
theoretical parameter ranges, exactly as published:

- ``bnm_*``: the published simplification of the coupled update drops the
  A*(Ax - By) correction, which is the coupled recurrence with a zero
  coupling step; the tables follow that simplification, so these presets
  pin ``lam = 0``.
- ``wq_*``: the coupling step 1 equals the boundary 2/(L1 + L2); the
  printed first-row value matches the *swapped* block assignment, which is
  what ``wq_t3`` pins (see the solver module notes).
"""

from dataclasses import dataclass, field

import numpy as np

from .operators import (
    Contraction,
    Lipschitzian,
    SequenceSpec,
    StronglyMonotone,
    map_from_rule,
    operator_catalog,
)
from .problems import (
    EXTRAGRADIENT_SFFPP,
    SCFPP,
    SCFPP_ADAPTIVE,
    SCFPEP,
    SFFPEP,
    SYNCHRONAL_VIP,
    ProblemSpec,
    StoppingRule,
)
from .projections import Box, WholeSpace
from .rules import Rational1D
from .solvers import run
from .spaces import LinearMap

__all__ = ["ExpectedRow", "NamedExample", "catalog", "get_example", "run_example"]

TABULATED = "tabulated"
DERIVED = "derived"


@dataclass(frozen=True)
class ExpectedRow:
    """A pinned trace row: iterate index, values, per-value tolerances."""

    n: int
    values: tuple          # (x,) or (x, y)
    tolerances: tuple
    provenance: str

    def __post_init__(self):
        if len(self.values) != len(self.tolerances):
            raise ValueError("values and tolerances differ in length")
        if self.provenance not in (TABULATED, DERIVED):
            raise ValueError("provenance must be tabulated|derived")


@dataclass
class NamedExample:
    id: str
    spec: ProblemSpec
    starts: list                   # [(x0,) or (x0, y0), ...]
    default_rule: StoppingRule
    expected: list = field(default_factory=list)
    notes: str = ""

    def to_doc(self):
        """Structured description for listings and machine consumption."""
        return {
            "id": self.id,
            "family": self.spec.family,
            "starts": [
                [np.atleast_1d(np.asarray(s, dtype=float)).tolist() for s in start]
                for start in self.starts
            ],
            "max_iters": self.default_rule.max_iters,
            "expected_rows": [
                {
                    "n": row.n,
                    "values": [float(v) for v in row.values],
                    "tolerances": [float(t) for t in row.tolerances],
                    "provenance": row.provenance,
                }
                for row in self.expected
            ],
            "notes": self.notes,
        }


def _scalar_map(v):
    return LinearMap([[float(v)]])


def _bnm_spec():
    ops = operator_catalog()
    return ProblemSpec(
        family=SFFPEP,
        U=ops["bigU"],
        T=ops["smallS"],
        A=_scalar_map(1.0),
        B=_scalar_map(4.0),
        C=WholeSpace(1),
        Q=WholeSpace(1),
        alpha=SequenceSpec.const(1.0 / 5.0),
        beta=SequenceSpec.const(1.0 / 8.0),
        lam=SequenceSpec.const(0.0),
        reference_solution=([5.0], [1.25]),
        enforce_ranges=False,   # lam = 0 reproduces the published simplification
    )


def _wq_spec(branch="swapped"):
    ops = operator_catalog()
    return ProblemSpec(
        family=SCFPEP,
        U_family=(ops["wqU"],),
        u_relax=(1.0 / 3.0,),
        u_weights=(1.0,),
        T_family=(ops["wqT"],),
        t_relax=(1.0 / 5.0,),
        t_weights=(1.0,),
        A=_scalar_map(1.0),
        B=_scalar_map(1.0),
        alpha=SequenceSpec.const(1.0 / 7.0),
        beta=SequenceSpec.const(1.0 / 9.0),
        lam=SequenceSpec.const(1.0),
        reference_solution=([1.0], [1.0]),
        branch_assignment=branch,
        enforce_ranges=False,   # lam = 1 sits on the boundary 2/(L1+L2)
    )


def _scfpp_spec():
    ops = operator_catalog()
    return ProblemSpec(
        family=SCFPP,
        T=ops["smallS"],
        G=ops["smallS"],
        A=_scalar_map(1.0),
        alpha=SequenceSpec.const(0.5),
        gamma=0.5,
        reference_solution=[1.25],
    )


def _adaptive_spec():
    ops = operator_catalog()
    return ProblemSpec(
        family=SCFPP_ADAPTIVE,
        U=ops["scaledNeg"],
        T=ops["scaledNeg"],
        A=LinearMap(np.diag([1.0, 2.0, 3.0])),
        alpha=SequenceSpec.const(0.5),
        reference_solution=[0.0, 0.0, 0.0],
    )


def _synchronal_spec():
    ops = operator_catalog()
    contraction = map_from_rule(
        Rational1D([0.0, 0.5], [1.0]),
        WholeSpace(1),
        declared_class=Contraction(0.5),
        known_fixed_points=([0.0],),
        name="halving",
    )
    steering = map_from_rule(
        Rational1D([0.0, 1.0], [1.0]),
        WholeSpace(1),
        declared_class=StronglyMonotone(1.0),
        known_fixed_points=([0.0],),
        name="identity-steering",
        extra_classes=(Lipschitzian(1.0),),
    )
    return ProblemSpec(
        family=SYNCHRONAL_VIP,
        T=ops["wqT"],
        f=contraction,
        G=steering,
        alpha=SequenceSpec.from_formula("1/(n+2)"),
        beta=SequenceSpec.const(0.5),
        mu=1.0,
        gamma_visc=0.5,
        reference_solution=[1.0],
    )


def _extragradient_spec():
    ops = operator_catalog()
    return ProblemSpec(
        family=EXTRAGRADIENT_SFFPP,
        T=ops["wqT"],
        G=ops["identity"],
        A=_scalar_map(1.0),
        C=Box([0.0], [np.inf]),
        Q=WholeSpace(1),
        alpha=SequenceSpec.const(0.5),
        beta=SequenceSpec.const(0.5),
        gamma_seq=SequenceSpec.const(0.5),
        reference_solution=[1.0],
    )


def catalog():
    """All named examples, keyed by id."""
    examples = {}

    examples["bnm_t1"] = NamedExample(
        id="bnm_t1",
        spec=_bnm_spec(),
        starts=[([10.0], [15.0])],
        default_rule=StoppingRule(max_iters=250),
        expected=[
            ExpectedRow(1, (9.898293685, 12.74500000), (1e-6, 1e-6), TABULATED),
            ExpectedRow(2, (9.797736851, 10.85982000), (1e-6, 1e-6), TABULATED),
            ExpectedRow(3, (9.698337655, 9.283809520), (1e-6, 1e-6), TABULATED),
            ExpectedRow(248, (5.001051418, 1.250000002), (1e-4, 1e-6), TABULATED),
            ExpectedRow(249, (5.001012726, 1.250000002), (1e-4, 1e-6), TABULATED),
            ExpectedRow(250, (5.000975458, 1.250000002), (1e-4, 1e-6), TABULATED),
        ],
        notes=(
            "Equality problem with decoupled blocks (lam = 0, matching the "
            "published simplification); converges to (5, 5/4)."
        ),
    )
    examples["bnm_t2"] = NamedExample(
        id="bnm_t2",
        spec=_bnm_spec(),
        starts=[([5.0], [1.25])],
        default_rule=StoppingRule(max_iters=100),
        expected=[
            ExpectedRow(n, (5.0, 1.25), (1e-9, 1e-9), TABULATED)
            for n in range(0, 101)
        ],
        notes="Started at the solution; every iterate stays put.",
    )
    examples["wq_t3"] = NamedExample(
        id="wq_t3",
        spec=_wq_spec("swapped"),
        starts=[([5.0], [5.0])],
        default_rule=StoppingRule(max_iters=2000),
        expected=[
            ExpectedRow(1, (4.916472663,), (1e-6,), TABULATED),
            ExpectedRow(2000, (1.0, 1.0), (1e-3, 1e-3), DERIVED),
        ],
        notes=(
            "Only the first x row of the reference table is reproducible, and "
            "only under the swapped block assignment; the y column matches "
            "neither assignment.  The limit (1, 1) is forced by the shared "
            "algorithmic target of both blocks."
        ),
    )
    examples["wq_t4"] = NamedExample(
        id="wq_t4",
        spec=_wq_spec("swapped"),
        starts=[([-5.0], [-5.0])],
        default_rule=StoppingRule(max_iters=149),
        expected=[],
        notes=(
            "Negative start: the piecewise operator is evaluated on its zero "
            "branch below the breakpoint.  The trajectory is recorded for "
            "reference only; the published rows match no assignment of the "
            "printed update rules and no values are asserted."
        ),
    )
    examples["scfpp_smallS"] = NamedExample(
        id="scfpp_smallS",
        spec=_scfpp_spec(),
        starts=[([10.0],)],
        default_rule=StoppingRule(max_iters=200, residual_tol=1e-12),
        expected=[ExpectedRow(1, (4.4,), (1e-12,), DERIVED)],
        notes="Iterate-power splitting with both operators the affine map (x+5)/5.",
    )
    examples["adaptive_demo"] = NamedExample(
        id="adaptive_demo",
        spec=_adaptive_spec(),
        starts=[([1.0, 1.0, 1.0],)],
        default_rule=StoppingRule(max_iters=5000, residual_tol=1e-10),
        expected=[],
        notes=(
            "Norm-free step choice on the scaled negation (demicontractive "
            "constant 3/7) against a diagonal coupling map."
        ),
    )
    examples["synchronal_demo"] = NamedExample(
        id="synchronal_demo",
        spec=_synchronal_spec(),
        starts=[([4.0],)],
        default_rule=StoppingRule(max_iters=100000, target_tol=1e-4),
        expected=[ExpectedRow(1, (2.0,), (1e-12,), DERIVED)],
        notes=(
            "Viscosity step toward the unique point of Fix((x+2)/3) = {1}; "
            "the harmonic weight sequence makes convergence O(1/n)."
        ),
    )
    examples["extragradient_1d"] = NamedExample(
        id="extragradient_1d",
        spec=_extragradient_spec(),
        starts=[([10.0],)],
        default_rule=StoppingRule(max_iters=500, residual_tol=1e-9),
        expected=[
            ExpectedRow(1, (8.25,), (1e-12,), DERIVED),
        ],
        notes=(
            "Cut-accumulating run on the half-line; the limit 1.0 is the "
            "unique point of C intersected with the fixed points of (x+2)/3."
        ),
    )
    return examples


def get_example(example_id):
    examples = catalog()
    if example_id not in examples:
        raise KeyError(
            "unknown example %r; known: %s" % (example_id, ", ".join(sorted(examples)))
        )
    return examples[example_id]


def run_example(example_id, start_index=0, rule=None):
    """Run a named example from one of its registered starts."""
    ex = get_example(example_id)
    start = ex.starts[start_index]
    rule = rule or ex.default_rule
    if ex.spec.two_variable:
        return run(ex.spec, start[0], start[1], rule=rule)
    return run(ex.spec, start[0], rule=rule)
