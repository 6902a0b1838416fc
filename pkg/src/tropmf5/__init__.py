"""Tropical Gröbner bases over Q (exact) and Q_p (capped precision) via Matrix-F5."""

from .errors import (
    BackendMismatch,
    IncomparableAtPrecision,
    NonHomogeneousError,
    PrecisionError,
    PrecisionExhausted,
    TropicalError,
    ZeroPolynomialError,
)
from .macaulay import MacaulayMatrix, Signature, build_full_macaulay, macaulay_row_count
from .mf5 import GroebnerReport, run_driver, tropical_mf5, tropical_mf5_sig
from .oracle import full_macaulay_dgb, hilbert_regularity_check
from .poly import (
    HomogeneousPoly,
    Term,
    TropicalOrder,
    compare_terms,
    enumerate_monomials,
    leading_monomial,
    leading_term,
    term_value,
)
from .precision import minor_valuation_oracle, stability_check, sufficient_precision
from .problem import ParseError, ProblemFile, format_problem, parse_problem
from .reduction import tropical_lup, tropical_row_echelon
from .scalars import INF, CappedScalar, ExactScalar, valuation

__all__ = [
    "BackendMismatch", "IncomparableAtPrecision", "NonHomogeneousError", "PrecisionError",
    "PrecisionExhausted", "TropicalError", "ZeroPolynomialError",
    "MacaulayMatrix", "Signature", "build_full_macaulay", "macaulay_row_count",
    "GroebnerReport", "run_driver", "tropical_mf5", "tropical_mf5_sig",
    "full_macaulay_dgb", "hilbert_regularity_check",
    "HomogeneousPoly", "Term", "TropicalOrder", "compare_terms", "enumerate_monomials",
    "leading_monomial", "leading_term", "term_value",
    "minor_valuation_oracle", "stability_check", "sufficient_precision",
    "ParseError", "ProblemFile", "format_problem", "parse_problem",
    "tropical_lup", "tropical_row_echelon",
    "INF", "CappedScalar", "ExactScalar", "valuation",
]
