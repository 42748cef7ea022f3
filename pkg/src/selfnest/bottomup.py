"""Bottom-up recursive functions on trees and on DAG reductions.

A function is given by its leaf value and a permutation-invariant combiner.
The combiner receives ``(value, count)`` pairs: a DAG edge with label N
contributes one pair with count N rather than N copies of the value.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

from .reduction import DagReduction
from .trees import Tree

__all__ = [
    "BottomUpSpec",
    "eval_tree",
    "eval_dag",
    "vertex_count",
    "leaf_count",
    "height_fn",
    "strahler",
    "BUILTINS",
]


@dataclass(frozen=True)
class BottomUpSpec:
    name: str
    leaf_value: Any
    combine: Callable[[Sequence[tuple[Any, int]]], Any]


def eval_tree(spec: BottomUpSpec, t: Tree):
    """Evaluate by one post-order traversal of every vertex of ``t``."""
    f0, combine = spec.leaf_value, spec.combine
    # frames: [node, child values]; shared nodes are deliberately revisited
    stack: list[tuple[Tree, list]] = [(t, [])]
    while True:
        node, vals = stack[-1]
        if len(vals) < len(node.children):
            child = node.children[len(vals)]
            if child.children:
                stack.append((child, []))
            else:
                vals.append((f0, 1))
            continue
        stack.pop()
        value = combine(vals) if node.children else f0
        if not stack:
            return value
        stack[-1][1].append((value, 1))


def eval_dag(spec: BottomUpSpec, d: DagReduction, vertex=None):
    """Evaluate once per DAG vertex in increasing height order."""
    target = d.root if vertex is None else vertex
    values = {}
    for u in d.vertices():
        kids = d.children(u)
        values[u] = spec.combine([(values[v], n) for v, n in kids]) if kids else spec.leaf_value
        if u == target:
            break
    return values[target]


def _strahler(pairs):
    m = max(v for v, _ in pairs)
    ties = sum(n for v, n in pairs if v == m)
    return m + 1 if ties >= 2 else m


vertex_count = BottomUpSpec("vertex_count", 1, lambda ps: 1 + sum(v * n for v, n in ps))
leaf_count = BottomUpSpec("leaf_count", 1, lambda ps: sum(v * n for v, n in ps))
height_fn = BottomUpSpec("height", 0, lambda ps: 1 + max(v for v, _ in ps))
# leaves have order 0; the maximum child order is bumped when attained twice
strahler = BottomUpSpec("strahler", 0, _strahler)

BUILTINS = {s.name: s for s in (vertex_count, leaf_count, height_fn, strahler)}
