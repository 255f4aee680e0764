"""Core types: grid functions, integer sequences and the error hierarchy."""

from .errors import (
    AliasingError,
    ConvergenceError,
    CostGuardError,
    CutoffScaleError,
    DomainError,
    ErgavgError,
    ErrorContext,
    ErrorLog,
    RefinementError,
    StorageError,
    describe_error,
    error_handler,
)
from .gridfn import GridFunction, hl_maximal, inner_product, lp_norm, pairing, shift
from .sequences import (
    LacunarySet,
    difference_multiplicity,
    dyadic_set,
    floor_sqrt,
    lacunary_set,
    max_multiplicity_profile,
)

__all__ = [
    "GridFunction",
    "shift",
    "lp_norm",
    "inner_product",
    "pairing",
    "hl_maximal",
    "LacunarySet",
    "floor_sqrt",
    "lacunary_set",
    "dyadic_set",
    "difference_multiplicity",
    "max_multiplicity_profile",
    "ErgavgError",
    "DomainError",
    "AliasingError",
    "CutoffScaleError",
    "CostGuardError",
    "ConvergenceError",
    "RefinementError",
    "StorageError",
    "ErrorContext",
    "ErrorLog",
    "describe_error",
    "error_handler",
]
