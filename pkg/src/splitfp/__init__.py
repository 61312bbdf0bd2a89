"""Solvers for split common fixed point problems and their variant forms.

The package is organized around six pieces:

- :mod:`splitfp.spaces`: vectors, inner products, linear maps with adjoints,
  power-iteration spectral estimates
- :mod:`splitfp.operators`: the nonlinear-operator taxonomy, combinators,
  named example operators, and sampling-based class verifiers
- :mod:`splitfp.projections`: projectable convex sets and metric projections
- :mod:`splitfp.solvers`: the six iteration families behind one driver
- :mod:`splitfp.diagnostics`: monotone-distance monitors, 1-D fixed-point
  discovery, and the high-precision re-execution oracle
- :mod:`splitfp.presets`: named configurations reproducing the bundled
  reference tables
"""

from .diagnostics import (
    FejerReport,
    HighPrecisionTrace,
    PrecisionOracleConfig,
    fejer_check,
    find_fixed_points_1d,
    reexecute_high_precision,
)
from .operators import (
    FixedPointMap,
    SequenceSpec,
    convex_combine,
    map_from_rule,
    operator_catalog,
    power_apply,
    relax,
    verify_class,
)
from .presets import NamedExample, catalog, get_example, run_example
from .problems import IterationTrace, ProblemSpec, StoppingRule, ValidationError
from .projections import (
    Ball,
    Box,
    Halfspace,
    Intersection,
    WholeSpace,
    halfspace_from_distance_dominance,
    project,
)
from .rules import Piecewise1D, Rational1D
from .solvers import SolverError, run
from .spaces import LinearMap, estimate_norm_squared, inner, norm, point

__all__ = [
    "Ball",
    "Box",
    "FejerReport",
    "FixedPointMap",
    "Halfspace",
    "HighPrecisionTrace",
    "Intersection",
    "IterationTrace",
    "LinearMap",
    "NamedExample",
    "Piecewise1D",
    "PrecisionOracleConfig",
    "ProblemSpec",
    "Rational1D",
    "SequenceSpec",
    "SolverError",
    "StoppingRule",
    "ValidationError",
    "WholeSpace",
    "catalog",
    "convex_combine",
    "estimate_norm_squared",
    "fejer_check",
    "find_fixed_points_1d",
    "get_example",
    "halfspace_from_distance_dominance",
    "inner",
    "map_from_rule",
    "norm",
    "operator_catalog",
    "point",
    "power_apply",
    "project",
    "reexecute_high_precision",
    "relax",
    "run",
    "run_example",
    "verify_class",
]
