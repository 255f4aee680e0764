"""Torus transforms, cutoffs, exponential-sum symbols and paraproducts."""

from .cutoffs import CutoffKind, CutoffSpec, band_project, cutoff_psi
from .paraproduct import model_paraproduct, shifted_square_function
from .symbols import (
    SymbolQuery,
    continuous_symbol,
    dirichlet_kernel,
    discrete_symbol,
    principal_arc_witness,
)
from .transform import FrequencyGrid, torus_transform

__all__ = [
    "FrequencyGrid",
    "torus_transform",
    "cutoff_psi",
    "CutoffKind",
    "CutoffSpec",
    "band_project",
    "dirichlet_kernel",
    "SymbolQuery",
    "discrete_symbol",
    "continuous_symbol",
    "principal_arc_witness",
    "model_paraproduct",
    "shifted_square_function",
]
