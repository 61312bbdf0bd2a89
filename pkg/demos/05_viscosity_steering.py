"""
Viscosity steering
==================

The averaged-power viscosity iteration drifts toward the point of the
fixed-point set singled out by the steering condition.  With vanishing
weights 1/(n+2) the drift is O(1/n): slow, but aimed.
"""

import numpy as np

from splitfp import StoppingRule, find_fixed_points_1d, run_example
from splitfp.presets import get_example
from splitfp.spaces import inner

spec = get_example("synchronal_demo").spec

# the target: scan the fixed-point set, then apply the steering test
roots = find_fixed_points_1d(spec.T, (0.0, 10.0), grid=10001).roots
print("fixed points of the averaged operator:", roots)
for cand in roots:
    drive = spec.gamma_visc * spec.f(np.array([cand])) - spec.mu * spec.G(
        np.array([cand])
    )
    ok = all(inner(drive, np.array([r - cand])) <= 1e-12 for r in roots)
    print("  steering condition at %.6f: %s" % (cand, "holds" if ok else "fails"))

trace = run_example("synchronal_demo",
                    rule=StoppingRule(max_iters=100000, target_tol=1e-4))
print("\nconvergence snapshots (harmonic weights -> O(1/n) error):")
for n in (0, 1, 10, 100, 1000, 10000, trace.final.n):
    if n < len(trace.records):
        print("  n=%-6d x=%.8f" % (n, trace.records[n].x[0]))
print("stopped by %s after %d iterations" % (trace.stop_reason, trace.final.n))
