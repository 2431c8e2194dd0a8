"""Exact permutation pattern matching: solvers, witnesses, reductions."""

from .perm import (
    Direction,
    Embedding,
    IncidenceGraph,
    Permutation,
    Point,
    incidence_graph,
    lis_lds,
    neighbor,
    parse_permutation,
    validate_embedding,
)

__all__ = [
    "Direction",
    "Embedding",
    "IncidenceGraph",
    "Permutation",
    "Point",
    "incidence_graph",
    "lis_lds",
    "neighbor",
    "parse_permutation",
    "validate_embedding",
]

__version__ = "0.1.0"
