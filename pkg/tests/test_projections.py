"""Metric projections, the halfspace builder, and Dykstra's method."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from splitfp.projections import (
    Ball,
    Box,
    Halfspace,
    InfeasibleIntersection,
    Intersection,
    WholeSpace,
    check_projection_inequalities,
    contains,
    halfspace_from_distance_dominance,
    project,
)
from splitfp.spaces import inner, norm


def test_box_halfline():
    S = Box([0.0], [np.inf])
    assert project(S, [-2.0])[0] == 0.0
    assert project(S, [3.5])[0] == 3.5


def test_halfspace_closed_form():
    S = Halfspace([1.0, 0.0], 0.0)  # z_1 <= 0
    assert_allclose(project(S, [2.0, 3.0]), [0.0, 3.0])
    assert_allclose(project(S, [-1.0, 4.0]), [-1.0, 4.0])


def test_ball_closed_form():
    S = Ball([0.0, 0.0], 1.0)
    assert_allclose(project(S, [2.0, 0.0]), [1.0, 0.0])
    assert_allclose(project(S, [0.3, 0.4]), [0.3, 0.4])


def test_degenerate_halfspace_is_whole_space():
    S = Halfspace([0.0, 0.0], 1.0)
    assert S.is_whole_space
    assert_allclose(project(S, [5.0, -3.0]), [5.0, -3.0])
    with pytest.raises(ValueError):
        Halfspace([0.0], -1.0)


def test_intersection_hyperplane_pair():
    # z_1 >= 1 and z_1 <= 1 pin the hyperplane z_1 = 1
    S = Intersection([Halfspace([-1.0, 0.0], -1.0), Halfspace([1.0, 0.0], 1.0)])
    assert_allclose(project(S, [0.0, 5.0]), [1.0, 5.0], atol=1e-10)


def test_intersection_1d_fast_path_exact():
    S = Intersection([
        Box([0.0], [np.inf]),
        Halfspace([1.0], 7.0),      # z <= 7
        Halfspace([-2.0], -4.0),    # z >= 2
    ])
    assert project(S, [10.0])[0] == 7.0
    assert project(S, [1.0])[0] == 2.0
    assert project(S, [5.0])[0] == 5.0


def test_intersection_single_body_matches_closed_form():
    rng = np.random.default_rng(3)
    body = Box([-1.0, 0.0], [2.0, 5.0])
    S = Intersection([body, WholeSpace(2)])
    for _ in range(50):
        x = rng.normal(scale=4.0, size=2)
        assert_allclose(project(S, x), project(body, x), atol=1e-10)


def test_projection_idempotent():
    rng = np.random.default_rng(5)
    bodies = [
        Box([-1.0, -1.0], [1.0, 1.0]),
        Ball([0.5, 0.0], 2.0),
        Halfspace([1.0, 2.0], 1.0),
        Intersection([Ball([0.0, 0.0], 3.0), Halfspace([1.0, 0.0], 0.5)]),
    ]
    for S in bodies:
        for _ in range(50):
            x = rng.normal(scale=3.0, size=2)
            p = project(S, x)
            assert norm(project(S, p) - p) <= 1e-10


def test_projection_nonexpansive_sampled():
    rng = np.random.default_rng(9)
    bodies = [
        Box([-1.0, 0.0], [1.0, np.inf]),
        Ball([1.0, -1.0], 1.5),
        Halfspace([1.0, -1.0], 0.3),
        Intersection([Box([-2.0, -2.0], [2.0, 2.0]), Halfspace([1.0, 1.0], 1.0)]),
        WholeSpace(2),
    ]
    for S in bodies:
        for _ in range(1000):
            x = rng.normal(scale=4.0, size=2)
            y = rng.normal(scale=4.0, size=2)
            assert norm(project(S, x) - project(S, y)) <= norm(x - y) + 1e-10


def test_variational_characterization():
    rng = np.random.default_rng(13)
    S = Ball([0.0, 0.0], 1.0)
    for _ in range(50):
        x = rng.normal(scale=3.0, size=2)
        px = project(S, x)
        for _ in range(100):
            z = project(S, rng.normal(scale=2.0, size=2))
            assert inner(x - px, z - px) <= 1e-9


def test_halfspace_from_distance_dominance_cases():
    same = halfspace_from_distance_dominance([1.0, 2.0], [1.0, 2.0])
    assert isinstance(same, WholeSpace)

    bisector = halfspace_from_distance_dominance([2.0, 0.0], [0.0, 0.0])
    # perpendicular bisector: the set is z_1 >= 1
    assert contains(bisector, [1.5, 7.0])
    assert not contains(bisector, [0.5, 7.0])

    mid = halfspace_from_distance_dominance([5.0], [9.0])
    assert project(mid, [10.0])[0] == pytest.approx(7.0, abs=1e-12)


def test_halfspace_membership_equivalence():
    rng = np.random.default_rng(17)
    near = np.array([1.0, -2.0])
    far = np.array([-3.0, 0.5])
    H = halfspace_from_distance_dominance(near, far)
    for _ in range(1000):
        z = rng.normal(scale=5.0, size=2)
        geometric = norm(near - z) <= norm(far - z) + 1e-12
        assert contains(H, z, tol=1e-9) == geometric


def test_projection_inequality_report_trivial():
    S = Box([0.0], [np.inf])
    rep = check_projection_inequalities(S, [3.0], [4.0])  # x already in S
    assert rep.shrink_lhs == 0.0
    assert rep.passed


def test_projection_inequality_halfline_derived():
    # x = -3 projects to 0: 9 <= 49 - 16 = 33
    S = Box([0.0], [np.inf])
    rep = check_projection_inequalities(S, [-3.0], [4.0])
    assert rep.shrink_lhs == pytest.approx(9.0)
    assert rep.shrink_rhs == pytest.approx(33.0)
    assert rep.passed


def test_projection_inequality_ball_derived():
    # P(2,0) = (1,0): 1 <= 5 - 2 = 3
    S = Ball([0.0, 0.0], 1.0)
    rep = check_projection_inequalities(S, [2.0, 0.0], [0.0, 1.0])
    assert rep.shrink_lhs == pytest.approx(1.0)
    assert rep.shrink_rhs == pytest.approx(3.0)
    assert rep.passed


def test_projection_inequality_rejects_outside_anchor():
    S = Box([0.0], [np.inf])
    with pytest.raises(ValueError):
        check_projection_inequalities(S, [1.0], [-1.0])


def test_empty_intersection_1d():
    S = Intersection([Halfspace([1.0], -1.0), Halfspace([-1.0], -1.0)])
    with pytest.raises(InfeasibleIntersection):
        project(S, [0.0])


def test_empty_intersection_dykstra_detection():
    # parallel disjoint halfspaces in 2-D force the cyclic path to stall
    S = Intersection([Halfspace([1.0, 0.0], -1.0), Halfspace([-1.0, 0.0], -1.0)])
    with pytest.raises(InfeasibleIntersection):
        project(S, [0.0, 0.0])
