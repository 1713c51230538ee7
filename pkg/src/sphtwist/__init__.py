"""Twist relations on the cycle of projective lines, checked in two representations."""

from .ktheory import evaluate_word_matrix, verify_relator_matrix
from .search import Goal, SearchResult, search
from .sheaves import DObject, cohomology, evaluate_word, parse_object
from .verifier import cross_check, verify_on_generators, verify_relation_suite
from .words import PresentationSpec, Relator, free_reduce, invert, parse_word, relators

__all__ = [
    "DObject",
    "Goal",
    "PresentationSpec",
    "Relator",
    "SearchResult",
    "cohomology",
    "cross_check",
    "evaluate_word",
    "evaluate_word_matrix",
    "free_reduce",
    "invert",
    "parse_object",
    "parse_word",
    "relators",
    "search",
    "verify_on_generators",
    "verify_relation_suite",
    "verify_relator_matrix",
]

__version__ = "0.1.0"
