"""Sparse multivariate polynomials, resultants, gcds and the input grammar."""

from .gcd import content_in, is_coprime, poly_gcd, squarefree_part
from .multipoly import (
    DEFAULT_VARIABLES,
    MultiPoly,
    dehomogenize,
    determinant,
    format_poly,
    homogenize,
    inverse_linear_change,
    inverse_matrix,
    linear_change,
    split_linear,
)
from .parser import parse_input_file, parse_poly
from .resultant import (
    PrsSequence,
    bareiss_determinant,
    pseudo_remainder,
    resultant,
    subresultant_prs,
    sylvester_matrix,
    sylvester_resultant,
)

__all__ = [
    "DEFAULT_VARIABLES",
    "MultiPoly",
    "PrsSequence",
    "bareiss_determinant",
    "content_in",
    "dehomogenize",
    "determinant",
    "format_poly",
    "homogenize",
    "inverse_linear_change",
    "inverse_matrix",
    "is_coprime",
    "linear_change",
    "parse_input_file",
    "parse_poly",
    "poly_gcd",
    "pseudo_remainder",
    "resultant",
    "split_linear",
    "squarefree_part",
    "subresultant_prs",
    "sylvester_matrix",
    "sylvester_resultant",
]
