"""
detrep core - exact determinantal representations.

This package holds the pure library: exact polynomial and matrix arithmetic,
pencil constructions, permanent/determinant oracles, identity testing and
symmetry checks. It has no command-line or configuration concerns.
"""

__version__ = "0.1.0"

from .constructions import (
    create_pencil,
    equivariant_det,
    equivariant_perm,
    grenet,
    list_available_constructions,
    quadric_full,
    quadric_half,
    regular_det,
    trivial_det,
    waring_terms,
)
from .determinants import PathEvaluator, path_det, pencil_symbolic_det
from .identity_testing import VerificationReport, pencil_pit_equal
from .oracles import perm_naive, perm_ryser
from .pencil import PencilMatrix, Variable, pencil_eval
from .polynomial import Monomial, Polynomial

__all__ = [
    "Monomial",
    "PathEvaluator",
    "PencilMatrix",
    "Polynomial",
    "Variable",
    "VerificationReport",
    "create_pencil",
    "equivariant_det",
    "equivariant_perm",
    "grenet",
    "list_available_constructions",
    "path_det",
    "pencil_eval",
    "pencil_pit_equal",
    "pencil_symbolic_det",
    "perm_naive",
    "perm_ryser",
    "quadric_full",
    "quadric_half",
    "regular_det",
    "trivial_det",
    "waring_terms",
]
