"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline.
Every tolerance is pinned here; nothing is deferred to later calibration.
"""

import math
import time
from decimal import Decimal

import numpy as np
import pytest

from splitfp.diagnostics import (
    PrecisionOracleConfig,
    fejer_check,
    find_fixed_points_1d,
    reexecute_high_precision,
)
from splitfp.operators import (
    Contraction,
    FixedPointMap,
    Nonexpansive,
    StrictlyPseudocontractive,
    check_power_inequality_equivalences,
    check_strong_monotonicity_of_complement,
    map_from_rule,
    operator_catalog,
    power_map,
    verify_class,
)
from splitfp.projections import check_projection_inequalities
from splitfp.presets import get_example, run_example
from splitfp.problems import StoppingRule
from splitfp.projections import (
    Ball,
    Box,
    Halfspace,
    Intersection,
    WholeSpace,
    contains,
    project,
)
from splitfp.rules import Rational1D
from splitfp.solvers import run, step_extragradient
from splitfp.spaces import inner, norm


def _announce(number, description):
    def decorator(fn):
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print("ACCEPTANCE %d: FAIL - %s" % (number, description))
                raise
            print("ACCEPTANCE %d: PASS - %s" % (number, description))

        wrapper.__name__ = fn.__name__
        return wrapper

    return decorator


@_announce(1, "reference table 1 rows and endpoint, under 1 second")
def test_criterion_01_table1():
    t0 = time.perf_counter()
    trace = run_example("bnm_t1", rule=StoppingRule(max_iters=250))
    elapsed = time.perf_counter() - t0
    rows = {
        1: (9.898293685, 12.74500000),
        2: (9.797736851, 10.85982000),
        3: (9.698337655, 9.283809520),
    }
    for n, (x, y) in rows.items():
        assert abs(trace.records[n].x[0] - x) <= 1e-6
        assert abs(trace.records[n].y[0] - y) <= 1e-6
    assert abs(trace.records[250].x[0] - 5.000975458) <= 1e-4
    assert abs(trace.records[250].y[0] - 1.250000002) <= 1e-6
    assert elapsed < 1.0


@_announce(2, "reference table 2 stationarity at (5, 1.25) to 1e-9")
def test_criterion_02_table2():
    trace = run_example("bnm_t2", rule=StoppingRule(max_iters=100))
    assert len(trace.records) == 101
    for rec in trace.records:
        assert abs(rec.x[0] - 5.0) <= 1e-9
        assert abs(rec.y[0] - 1.25) <= 1e-9


@_announce(3, "wq first row under the swapped branch, then the (1,1) limit")
def test_criterion_03_wq():
    ex = get_example("wq_t3")
    assert ex.spec.branch_assignment == "swapped"
    trace = run_example("wq_t3", rule=StoppingRule(max_iters=2000))
    assert abs(trace.records[1].x[0] - 4.916472663) <= 1e-6
    assert abs(trace.records[2000].x[0] - 1.0) <= 1e-3
    assert abs(trace.records[2000].y[0] - 1.0) <= 1e-3
    # the printed (unswapped) assignment is available but its disagreement
    # with the reference table is documented, not asserted
    assert "swapped" in ex.notes


@_announce(4, "monotone distance decay toward each run's converged limit")
def test_criterion_04_fejer_suite():
    runs = {
        "bnm_t1": StoppingRule(max_iters=3000, stagnation_tol=1e-13),
        "wq_t3": StoppingRule(max_iters=4000, stagnation_tol=1e-13),
        "scfpp_smallS": StoppingRule(max_iters=400, stagnation_tol=1e-15),
        "adaptive_demo": StoppingRule(max_iters=5000, residual_tol=1e-12),
    }
    for ex_id, rule in runs.items():
        trace = run_example(ex_id, rule=rule)
        final = trace.final
        target = final.x if final.y is None else (final.x, final.y)
        report = fejer_check(trace, target, slack=1e-8)
        assert report.monotone, (ex_id, report.first_violation)


@_announce(5, "adaptive step sizes recomputed independently; residual decay")
def test_criterion_05_adaptive():
    spec = get_example("adaptive_demo").spec
    trace = run_example("adaptive_demo",
                        rule=StoppingRule(max_iters=5000, residual_tol=1e-10))
    A = spec.A.matrix
    k = 3.0 / 7.0
    for rec in trace.records[1:]:
        x_prev = trace.records[rec.n - 1].x
        ax = A @ x_prev
        diff = -2.5 * ax - ax
        if np.linalg.norm(diff) <= 1e-14 * (1.0 + np.linalg.norm(ax)):
            expected = 0.0
        else:
            adj = A.T @ diff
            expected = (
                (1.0 - k) * np.linalg.norm(diff) ** 2
                / (2.0 * np.linalg.norm(adj) ** 2)
            )
        assert abs(rec.step - expected) <= 1e-12, rec.n
    below = [rec.n for rec in trace.records[1:] if rec.residual_primary < 1e-8]
    assert below and below[0] <= 5000


@_announce(6, "extra-gradient departure growth, cut membership, limit, freeze")
def test_criterion_06_extragradient():
    spec = get_example("extragradient_1d").spec
    x0 = np.array([10.0])
    x, cuts = x0, []
    departures = [0.0]
    for n in range(200):
        res = step_extragradient(spec, x, cuts, x0, n)
        for cut in res.cuts[len(cuts):]:
            assert contains(cut, [1.0])   # the solution survives every cut
        x, cuts = res.x, res.cuts
        departures.append(norm(x - x0))
        if res.residual_primary <= 1e-9:
            break
    assert all(b >= a - 1e-12 for a, b in zip(departures, departures[1:]))
    assert abs(x[0] - 1.0) <= 1e-6

    # trivial maps freeze the iterate at the projection of the start
    from splitfp.problems import EXTRAGRADIENT_SFFPP, ProblemSpec
    from splitfp.operators import SequenceSpec
    from splitfp.spaces import LinearMap

    ops = operator_catalog()
    frozen_spec = ProblemSpec(
        family=EXTRAGRADIENT_SFFPP, T=ops["identity"], G=ops["identity"],
        A=LinearMap([[1.0]]), C=Box([0.0], [np.inf]), Q=WholeSpace(1),
        alpha=SequenceSpec.const(0.5), beta=SequenceSpec.const(0.5),
        gamma_seq=SequenceSpec.const(0.5),
    )
    frozen = run(frozen_spec, [-3.0], rule=StoppingRule(max_iters=4))
    assert frozen.records[1].x[0] == 0.0
    assert all(rec.x[0] == 0.0 for rec in frozen.records[1:])


@_announce(7, "declared classes verified; both published negatives hold")
def test_criterion_07_operator_classes():
    cat = operator_catalog()
    for name, op in cat.items():
        for seed in (1, 2, 3, 4, 5):
            report = verify_class(op, op.declared_class, samples=1000, seed=seed)
            assert report.passed, (name, seed, report.violations[:1])
    # negative 1: the quasi-nonexpansive rational map is not nonexpansive
    for seed in (1, 2, 3, 4, 5):
        assert not verify_class(cat["heDu"], Nonexpansive(),
                                samples=1000, seed=seed).passed
    # negative 2: the sine example fails strict pseudocontractivity at the
    # analytic witness pair (2/pi, 2/(3 pi)): 256/(81 pi^2) > 160/(81 pi^2)
    witness = ([2.0 / math.pi], [2.0 / (3.0 * math.pi)])
    report = verify_class(cat["browderPetryshyn"],
                          StrictlyPseudocontractive(0.999999),
                          samples=1, seed=1, extra_pairs=[witness])
    rec = report.records[0]
    assert not rec.passed
    assert abs(rec.lhs - 256.0 / (81.0 * math.pi ** 2)) <= 1e-12
    assert rec.rhs < 160.0 / (81.0 * math.pi ** 2) + 1e-12


@_announce(8, "iterate-power, projection, and monotonicity inequality suites")
def test_criterion_08_lemma_suite():
    cat = operator_catalog()
    smallS = cat["smallS"]
    rng = np.random.default_rng(42)
    for _ in range(500):
        x = rng.uniform(0.0, 20.0)
        n = int(rng.integers(1, 11))
        rep = check_power_inequality_equivalences(smallS, [1.25], [x], n=n)
        assert rep.distance_holds and rep.forward_holds and rep.backward_holds
        assert rep.implication_ok

    variants = [
        Box([0.0, -1.0], [np.inf, 1.0]),
        Halfspace([1.0, 1.0], 1.0),
        Ball([0.0, 0.0], 2.0),
        Intersection([Box([-3.0, -3.0], [3.0, 3.0]), Halfspace([1.0, 0.0], 1.0)]),
        WholeSpace(2),
    ]
    for S in variants:
        for _ in range(500):
            x = rng.normal(scale=4.0, size=2)
            y = project(S, rng.normal(scale=4.0, size=2))
            rep = check_projection_inequalities(S, x, y)
            assert rep.passed

    halving = map_from_rule(Rational1D([0.0, 0.5], [1.0]), WholeSpace(1),
                            declared_class=Contraction(0.5),
                            known_fixed_points=([0.0],))
    assert check_strong_monotonicity_of_complement(halving, 1000, seed=1).passed
    sine_half = FixedPointMap(
        lambda v: np.array([0.5 * math.sin(v[0])]), Box([-1.0], [1.0]),
        declared_class=Contraction(0.5), known_fixed_points=([0.0],),
    )
    assert check_strong_monotonicity_of_complement(sine_half, 1000, seed=1).passed

    for beta in (0.1, 0.5, 0.9):
        for n in (1, 2, 4):
            Sn = power_map(halving, n)
            averaged = FixedPointMap(
                lambda v, b=beta, S=Sn: b * v + (1.0 - b) * S(v),
                halving.domain, known_fixed_points=([0.0],),
            )
            assert verify_class(averaged, Nonexpansive(),
                                samples=500, seed=1).passed
            scan_avg = find_fixed_points_1d(averaged, (-5.0, 5.0), grid=2001)
            scan_pow = find_fixed_points_1d(Sn, (-5.0, 5.0), grid=2001)
            assert scan_avg.roots == pytest.approx(scan_pow.roots, abs=1e-9)


@_announce(9, "float64 trace certified by the 30-digit oracle; printed rows")
def test_criterion_09_oracle_agreement():
    ex = get_example("bnm_t1")
    trace = run(ex.spec, [10.0], [15.0], rule=StoppingRule(max_iters=100))
    oracle = reexecute_high_precision(
        ex.spec, [10.0], [15.0], PrecisionOracleConfig(digits=30, max_n=100)
    )
    for rec, hp in zip(trace.records, oracle.records):
        for got, want in ((rec.x[0], hp.x[0]), (rec.y[0], hp.y[0])):
            assert abs(Decimal(got) - want) <= Decimal("1e-9") * (1 + abs(want))
    printed = {
        1: ("9.898293685", "12.74500000"),
        2: ("9.797736851", "10.85982000"),
        3: ("9.698337655", "9.283809520"),
    }
    for n, (px, py) in printed.items():
        # the reference was computed at 10 significant digits of working
        # precision, so its digits carry one unit of last-place slack
        for got, text in ((oracle.records[n].x[0], px),
                          (oracle.records[n].y[0], py)):
            ulp = Decimal(10) ** -len(text.split(".")[1])
            assert abs(got - Decimal(text)) <= ulp


@_announce(10, "viscosity run reaches the brute-forced target point")
def test_criterion_10_synchronal():
    spec = get_example("synchronal_demo").spec
    # brute-force the target: scan the fixed-point set, then test the
    # steering condition <(gamma f - mu G) x*, x - x*> <= 0 over that set
    roots = find_fixed_points_1d(spec.T, (0.0, 10.0), grid=10001).roots
    assert roots == pytest.approx([1.0], abs=1e-9)
    candidates = []
    for cand in roots:
        drive = (
            spec.gamma_visc * spec.f(np.array([cand]))
            - spec.mu * spec.G(np.array([cand]))
        )
        if all(inner(drive, np.array([other - cand])) <= 1e-12
               for other in roots):
            candidates.append(cand)
    assert candidates == pytest.approx([1.0], abs=1e-9)
    target = candidates[0]

    trace = run_example(
        "synchronal_demo",
        rule=StoppingRule(max_iters=100000, target_tol=1e-4),
    )
    assert trace.final.n <= 100000
    assert abs(trace.final.x[0] - target) <= 1e-4
