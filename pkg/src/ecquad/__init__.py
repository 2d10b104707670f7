"""Elliptic-curve discrete logarithms by intersecting quadric hypersurfaces.

The package bundles a small exact-arithmetic kernel (prime fields, curves,
univariate and multivariate polynomials), a Groebner basis engine with
Buchberger and F4 paths, the quadric system builder and an end-to-end
solver with a baby-step giant-step oracle.
"""
from .curve import Curve, CurvePoint
from .errors import (CapabilityExceeded, ContainmentSuspected, Degenerate, DimensionError,
                     DivisionByZero, EcquadError, InconsistencyError, NoSolution,
                     ResourceError, SolverTimeout, UsageError)
from .field import FieldCtx, FieldElement
from .pipeline import SolverConfig, bsgs_oracle, solve

__version__ = "0.1.0"

__all__ = [
    "Curve", "CurvePoint", "FieldCtx", "FieldElement", "SolverConfig", "solve",
    "bsgs_oracle", "EcquadError", "UsageError", "DivisionByZero", "CapabilityExceeded",
    "InconsistencyError", "ResourceError", "DimensionError", "ContainmentSuspected",
    "Degenerate", "NoSolution", "SolverTimeout",
]
