"""Exact-arithmetic kernel: rationals, polynomials, resultants, root isolation, Q(sqrt 5)."""

from fractions import Fraction as Rat

from .mpoly import MPoly, mgcd, resultant, squarefree_part, sylvester_matrix
from .sturm import DEFAULT_WIDTH, RootInterval, real_root_count, simplest_between, sturm_isolate
from .surd import Surd, surd_min_poly
from .upoly import UPoly, exact_div

__all__ = [
    "Rat",
    "UPoly",
    "MPoly",
    "Surd",
    "RootInterval",
    "DEFAULT_WIDTH",
    "exact_div",
    "mgcd",
    "real_root_count",
    "resultant",
    "simplest_between",
    "squarefree_part",
    "sturm_isolate",
    "surd_min_poly",
    "sylvester_matrix",
]
