"""Free functional inequalities for the semicircle law and convex potentials.

Chebyshev series on ``(-2, 2)``, the non-commutative derivative on tensor
powers of the second-kind basis, equilibrium measures of convex
potentials, inequality runners, and a GUE Monte Carlo sampler.
"""

from .cheb import Basis, ChebSeries, evaluate, project
from .equilibrium import EquilibriumMeasure, Potential, equilibrium, solve_support
from .errors import FreeIneqError
from .tensor import TensorSeries

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "ChebSeries",
    "EquilibriumMeasure",
    "FreeIneqError",
    "Potential",
    "TensorSeries",
    "equilibrium",
    "evaluate",
    "project",
    "solve_support",
    "__version__",
]
