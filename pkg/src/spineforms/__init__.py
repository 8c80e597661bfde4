"""Exact arithmetic for fat-graph spines of bordered surfaces.

The package models trivalent spines with labeled boundary cusps, compiles
paths on them into 2x2 matrix words, and builds the induced Poisson and
symplectic structures on the shear-type coordinates.  Everything that can
be exact is exact: rationals via ``fractions.Fraction``, square roots via
a tiny quadratic extension, and formal results as integer Laurent
polynomials.
"""

from .algebra import Fraction, LaurentPoly, Mat2, SqrtExtension, SqrtRational
from .ribbon import Edge, FatGraph, HalfEdge, ValidationReport, Window, parse_graph, validate
from .paths import (
    GeodesicFunction,
    MatrixWord,
    PathWord,
    compile_path,
    evaluate,
    geodesic_function,
    lambda_length,
    positivity_check,
)
from .coords import (
    CoordinatePoint,
    LambdaAssignment,
    cross_ratio,
    lambda_of_dual_arcs,
    pending_ratio,
    shear_from_lambda,
)
from .flips import FlipRecord, flip_inner, flip_loop_adjacent, mutate_lambda, verify_flip_matrix_identities
from .forms import (
    CenterBasis,
    CoordinateIndexedMatrix,
    center_vectors,
    penner_form_matrix,
    poisson_bracket_numeric,
    poisson_matrix,
    verify_inverse,
    window_form_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "Fraction",
    "LaurentPoly",
    "Mat2",
    "SqrtExtension",
    "SqrtRational",
    "Edge",
    "FatGraph",
    "HalfEdge",
    "ValidationReport",
    "Window",
    "parse_graph",
    "validate",
    "GeodesicFunction",
    "MatrixWord",
    "PathWord",
    "compile_path",
    "evaluate",
    "geodesic_function",
    "lambda_length",
    "positivity_check",
    "CoordinatePoint",
    "LambdaAssignment",
    "cross_ratio",
    "lambda_of_dual_arcs",
    "pending_ratio",
    "shear_from_lambda",
    "FlipRecord",
    "flip_inner",
    "flip_loop_adjacent",
    "mutate_lambda",
    "verify_flip_matrix_identities",
    "CenterBasis",
    "CoordinateIndexedMatrix",
    "center_vectors",
    "penner_form_matrix",
    "poisson_bracket_numeric",
    "poisson_matrix",
    "verify_inverse",
    "window_form_matrix",
]
