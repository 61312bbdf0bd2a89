"""
Operator zoo
============

A tour of the named example operators: their declared regularity classes,
their fixed points, and two classifications that *fail*, each with a
concrete witness.
"""

import math

from splitfp import operator_catalog, verify_class
from splitfp.operators import Nonexpansive, StrictlyPseudocontractive

cat = operator_catalog()

print("catalog:")
for name, op in cat.items():
    fixed = [p.tolist() for p in op.known_fixed_points]
    print("  %-18s class=%-60s fixed=%s" % (name, op.declared_class, fixed))

# Every declared class survives a 1000-sample falsification screen.
print("\ndeclared-class screen (1000 samples, seed 1):")
for name, op in cat.items():
    report = verify_class(op, op.declared_class, samples=1000, seed=1)
    print("  %-18s %s" % (name, "PASS" if report.passed else "FAIL"))

# The rational map (y^2+2)/(1+y) keeps its distance to the fixed point 2
# from growing, yet pairs of nearby points can spread apart: it is
# quasi-nonexpansive but not nonexpansive.
report = verify_class(cat["heDu"], Nonexpansive(), samples=1000, seed=1)
worst = max(report.violations, key=lambda r: r.lhs - r.rhs)
print("\nheDu vs nonexpansiveness: %d violating pairs, e.g." % len(report.violations))
print("  " + worst.to_line())

# The damped sine map is demicontractive but not strictly pseudocontractive;
# the classical witness pair makes the gap exact: 256/(81 pi^2) on the left
# against at most 160/(81 pi^2) on the right.
x, z = 2.0 / math.pi, 2.0 / (3.0 * math.pi)
report = verify_class(
    cat["browderPetryshyn"], StrictlyPseudocontractive(0.999),
    samples=1, seed=1, extra_pairs=[([x], [z])],
)
rec = report.records[0]
print("\nsine map vs strict pseudocontractivity at the witness pair:")
print("  lhs = %.12f  (256/(81 pi^2) = %.12f)" % (rec.lhs, 256 / (81 * math.pi**2)))
print("  rhs = %.12f  (k -> 1 bound: %.12f)" % (rec.rhs, 160 / (81 * math.pi**2)))
