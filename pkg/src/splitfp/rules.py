"""Portable scalar update rules: rational functions and one-breakpoint piecewise.

Every operator appearing in the bundled reference configurations is a
rational function of one variable, possibly glued at a single breakpoint.
Keeping the rule as data (coefficient lists) rather than opaque code lets
the same operator be evaluated in float64 by the solvers, re-evaluated in
``decimal.Decimal`` by the high-precision oracle, and round-tripped through
the JSON configuration format.
"""

from decimal import Decimal

__all__ = ["Rational1D", "Piecewise1D", "rule_from_config"]


def _horner(coeffs, v):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * v + c
    return acc


class Rational1D:
    """p(x)/q(x) with coefficient lists in ascending powers of x."""

    def __init__(self, num, den=(1.0,)):
        self.num = tuple(float(c) for c in num)
        self.den = tuple(float(c) for c in den)
        if not self.num or not self.den:
            raise ValueError("coefficient lists must be nonempty")
        if not any(self.den):
            raise ValueError("denominator is identically zero")

    def __call__(self, v):
        return _horner(self.num, v) / _horner(self.den, v)

    def eval_decimal(self, v):
        if not hasattr(self, "_dec"):
            self._dec = (
                tuple(Decimal(c) for c in self.num),
                tuple(Decimal(c) for c in self.den),
            )
        num, den = self._dec
        return _horner(num, v) / _horner(den, v)

    def to_config(self):
        return {"num": list(self.num), "den": list(self.den)}

    def __repr__(self):
        return "Rational1D(num=%r, den=%r)" % (list(self.num), list(self.den))


class Piecewise1D:
    """Two rational branches split at one breakpoint.

    The left branch applies for ``v <= breakpoint`` (or ``v < breakpoint``
    when ``left_closed`` is False), the right branch otherwise.
    """

    def __init__(self, breakpoint, left, right, left_closed=True):
        self.breakpoint = float(breakpoint)
        self.left = left
        self.right = right
        self.left_closed = bool(left_closed)

    def _is_left(self, v):
        return v <= self.breakpoint if self.left_closed else v < self.breakpoint

    def __call__(self, v):
        return self.left(v) if self._is_left(v) else self.right(v)

    def eval_decimal(self, v):
        branch = self.left if self._is_left(v) else self.right
        return branch.eval_decimal(v)

    def to_config(self):
        return {
            "breakpoint": self.breakpoint,
            "left": self.left.to_config(),
            "right": self.right.to_config(),
            "left_closed": self.left_closed,
        }

    def __repr__(self):
        return "Piecewise1D(breakpoint=%r, left=%r, right=%r)" % (
            self.breakpoint,
            self.left,
            self.right,
        )


def rule_from_config(doc):
    """Parse a rule from its JSON form (inverse of ``to_config``)."""
    if "breakpoint" in doc:
        return Piecewise1D(
            doc["breakpoint"],
            rule_from_config(doc["left"]),
            rule_from_config(doc["right"]),
            doc.get("left_closed", True),
        )
    return Rational1D(doc["num"], doc.get("den", [1.0]))
