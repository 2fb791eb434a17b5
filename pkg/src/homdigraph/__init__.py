"""Homology digraphs of finite preordered spaces, computed exactly."""

__version__ = "0.1.0"

from .digraph import (
    ConceptPair,
    HomologyDigraph,
    Report,
    VerificationError,
    brute_force_digraph,
    enumerate_concepts,
    homology_digraph,
    homology_digraph_pair,
    induced_digraph_morphism,
    relative_kunneth,
    verify_connecting,
    verify_coproduct,
    verify_excision,
    verify_kunneth,
)
from .homology import homology, pair_homology
from .linalg import GF, GF2, QQ, parse_field
from .spaces import (
    FinitePreorderedSpace,
    HypothesisNotMet,
    InputError,
    NotT0Error,
    PairSpace,
    coproduct,
    make_pair,
    product,
    restrict,
    validate,
    wedge,
)

__all__ = [
    "ConceptPair",
    "FinitePreorderedSpace",
    "GF",
    "GF2",
    "HomologyDigraph",
    "HypothesisNotMet",
    "InputError",
    "NotT0Error",
    "PairSpace",
    "QQ",
    "Report",
    "VerificationError",
    "brute_force_digraph",
    "coproduct",
    "enumerate_concepts",
    "homology",
    "homology_digraph",
    "homology_digraph_pair",
    "induced_digraph_morphism",
    "make_pair",
    "pair_homology",
    "parse_field",
    "product",
    "relative_kunneth",
    "restrict",
    "validate",
    "verify_connecting",
    "verify_coproduct",
    "verify_excision",
    "verify_kunneth",
    "wedge",
]
