"""
Projection toolkit
==================

Closed-form metric projections, Dykstra's method on intersections, and the
distance-dominance halfspaces the extra-gradient solver cuts with.
"""

import numpy as np

from splitfp import Ball, Box, Halfspace, Intersection, project
from splitfp.projections import contains, halfspace_from_distance_dominance

# closed forms
half_line = Box([0.0], [np.inf])
print("P_[0,inf)(-2)        =", project(half_line, [-2.0]))

wall = Halfspace([1.0, 0.0], 0.0)          # z_1 <= 0
print("P_{z1<=0}(2, 3)      =", project(wall, [2.0, 3.0]))

disc = Ball([0.0, 0.0], 1.0)
print("P_disc(2, 0)         =", project(disc, [2.0, 0.0]))

# Dykstra on a genuine intersection: a box cut by a diagonal halfspace.
# Plain alternating projection would only find *a* feasible point; Dykstra's
# correction terms recover the nearest one.
wedge = Intersection([Box([-2.0, -2.0], [2.0, 2.0]), Halfspace([1.0, 1.0], 1.0)])
x = np.array([3.0, 2.5])
p = project(wedge, x)
print("P_wedge(3, 2.5)      =", p, " (feasible:", contains(wedge, p), ")")

# One-dimensional intersections collapse analytically before projecting,
# which keeps the reference runs exact.
interval = Intersection([half_line, Halfspace([1.0], 7.0), Halfspace([-2.0], -4.0)])
print("P_[2,7](10)          =", project(interval, [10.0]))

# the halfspace of points at least as close to `near` as to `far`
cut = halfspace_from_distance_dominance([5.0], [9.0])
print("closer-to-5-than-9   = {z <= %.1f}" % (cut.b / cut.a[0]))
print("  contains 6.9:", contains(cut, [6.9]), " contains 7.1:", contains(cut, [7.1]))
