"""Exact decision engine for Lipschitz equivalence of dust-like self-similar sets."""
from .decide import Verdict, decide, decide_ratio, verify_certificate
from .derivation import SearchBudget, common_refinement, equivalence_chain
from .polycore import SparsePoly, parse_poly
from .vectors import PowerVector, RatioVector, dimension, same_dimension

__all__ = [
    "PowerVector",
    "RatioVector",
    "SearchBudget",
    "SparsePoly",
    "Verdict",
    "common_refinement",
    "decide",
    "decide_ratio",
    "dimension",
    "equivalence_chain",
    "parse_poly",
    "same_dimension",
    "verify_certificate",
]

__version__ = "0.1.0"
