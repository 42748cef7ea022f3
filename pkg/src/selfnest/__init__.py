"""Unordered trees, their DAG reductions, and self-nested approximations."""

from .approx import approximate_tree, average_to_linear, min_self_nested_distance
from .editdist import brute_force_distance, edit_distance, edit_distance_dag
from .errors import GenerationError, GuardError, ParseError
from .reduction import (
    DagReduction,
    LinearDag,
    expand,
    expand_linear,
    from_linear,
    is_linear,
    is_self_nested_naive,
    reduce,
    to_linear,
)
from .trees import Tree, canonical_key, is_isomorphic, parse, random_tree

__all__ = [
    "Tree",
    "parse",
    "canonical_key",
    "is_isomorphic",
    "random_tree",
    "DagReduction",
    "LinearDag",
    "reduce",
    "expand",
    "expand_linear",
    "from_linear",
    "to_linear",
    "is_linear",
    "is_self_nested_naive",
    "edit_distance",
    "edit_distance_dag",
    "brute_force_distance",
    "average_to_linear",
    "approximate_tree",
    "min_self_nested_distance",
    "ParseError",
    "GuardError",
    "GenerationError",
]
