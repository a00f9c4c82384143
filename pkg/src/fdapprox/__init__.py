"""Finite-dimensional approximations of scheme-indexed C*-algebra constructions.

Construction schemes on finite ground sets, the poset of operator conditions,
its amalgamations, the family indexed by a scheme and verification suites.
"""
from . import blockop, limit, poset, scheme, verify
from .blockop import BlockOperator, ColumnShape, Rect, matrix_unit
from .errors import FDApproxError
from .limit import build_family, materialize_window
from .scheme import build_scheme, validate_params

__version__ = "0.1.0"

__all__ = [
    "BlockOperator", "ColumnShape", "FDApproxError", "Rect", "blockop", "build_family", "build_scheme",
    "limit", "materialize_window", "matrix_unit", "poset", "scheme", "validate_params", "verify",
]
