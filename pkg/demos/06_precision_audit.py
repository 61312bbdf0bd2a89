"""
Precision audit
===============

The decimal re-execution oracle replays a recurrence at a chosen digit
budget through a code path deliberately separate from the float64 solver.
Two things fall out: a certification of the float64 trace, and the
provenance of the bundled reference digits (they were produced at 10
significant digits of working precision).
"""

from decimal import Decimal

from splitfp import PrecisionOracleConfig, StoppingRule, reexecute_high_precision, run
from splitfp.presets import get_example

ex = get_example("bnm_t1")
trace = run(ex.spec, [10.0], [15.0], rule=StoppingRule(max_iters=100))
oracle = reexecute_high_precision(ex.spec, [10.0], [15.0],
                                  PrecisionOracleConfig(digits=30, max_n=100))

worst = Decimal(0)
for rec, hp in zip(trace.records, oracle.records):
    err = abs(Decimal(rec.x[0]) - hp.x[0]) / (1 + abs(hp.x[0]))
    worst = max(worst, err)
print("float64 vs 30-digit oracle over 100 iterations:")
print("  worst relative drift in x: %.3e" % worst)

lo = reexecute_high_precision(ex.spec, [10.0], [15.0],
                              PrecisionOracleConfig(digits=25, max_n=50))
hi = reexecute_high_precision(ex.spec, [10.0], [15.0],
                              PrecisionOracleConfig(digits=40, max_n=50))
gap = max(abs(a.x[0] - b.x[0]) for a, b in zip(lo.records, hi.records))
print("  25-digit vs 40-digit self-consistency: %.3e" % gap)

print("\nfirst rows at 30 digits (the published digits carry one last-place")
print("unit of the source's own 10-digit working precision):")
for rec in oracle.records[1:4]:
    print("  n=%d  x=%s" % (rec.n, rec.x[0]))
