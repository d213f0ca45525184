"""Frobenius splitting invariants of weighted-homogeneous hypersurfaces over F_p."""

from ._backend import BACKEND
from .wpoly import (
    Polynomial,
    WeightedRing,
    bracket_normal_form,
    make_ring,
    parse_poly,
    poly_mul,
    poly_pow,
    render,
    weighted_degree,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Polynomial",
    "WeightedRing",
    "bracket_normal_form",
    "make_ring",
    "parse_poly",
    "poly_mul",
    "poly_pow",
    "render",
    "weighted_degree",
]
