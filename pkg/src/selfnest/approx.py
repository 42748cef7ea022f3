"""Self-nested approximation by averaging, and the worst-case construction.

The averaging approximation replaces, for every pair of heights
``h2 < h1``, the number of height-``h2`` children under height-``h1``
vertices by its multiplicity-weighted mean over the DAG classes of height
``h1``, projected onto the nonnegative integers.  Two projections exist:
``"floor"`` (integer part, the default) and ``"nearest"`` (round half away
from zero, the L2-optimal integer).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction

from .editdist import DagDistance, edit_distance_dag
from .errors import GuardError
from .reduction import (
    DagReduction,
    LinearDag,
    expand_linear,
    from_linear,
    multiplicities,
    reduce,
)
from .trees import Tree, height, size

__all__ = [
    "ApproximationReport",
    "average_to_linear",
    "approximate_tree",
    "approximation_report",
    "worst_case_bound",
    "build_worst_case_tree",
    "min_self_nested_distance",
    "SEARCH_GUARD",
    "ROUNDING",
]

SEARCH_GUARD = 10**6


ROUNDING = ("floor", "nearest")


def _project(x: Fraction, rounding: str) -> int:
    if rounding == "floor":
        return math.floor(x)
    # x >= 0 here, so half away from zero is half up
    return math.floor(x + Fraction(1, 2))


def average_to_linear(
    d: DagReduction, stats: Counter | None = None, rounding: str = "floor"
) -> LinearDag:
    """Linear DAG of the averaging approximation of ``d``.

    Means are exact fractions before projection.  ``stats["edges"]`` (if
    given) counts edge visits, multiplicities included.
    """
    if rounding not in ROUNDING:
        raise ValueError(f"rounding must be one of {ROUNDING}, got {rounding!r}")
    mu = multiplicities(d)
    if stats is not None:
        stats["edges"] += d.n_edges
    weight = defaultdict(int)  # h1 -> sum of mu over classes of height h1
    for u, m in mu.items():
        weight[u[0]] += m
    total = defaultdict(int)  # (h1, h2) -> sum of mu(u) * N(u, v)
    for (u, v), n in d.edges.items():
        total[u[0], v[0]] += mu[u] * n
        if stats is not None:
            stats["edges"] += 1
    rows = tuple(
        tuple(_project(Fraction(total[h1, h2], weight[h1]), rounding) for h2 in range(h1))
        for h1 in range(1, d.height + 1)
    )
    return LinearDag(rows)


def approximate_tree(t: Tree, rounding: str = "floor") -> Tree:
    return expand_linear(average_to_linear(reduce(t), rounding=rounding))


@dataclass(frozen=True)
class ApproximationReport:
    size_in: int
    size_out: int
    delta: int
    height_in: int
    height_out: int

    CSV_HEADER = "size_in,size_out,delta,height"

    def csv_row(self) -> str:
        return f"{self.size_in},{self.size_out},{self.delta},{self.height_in}"


def approximation_report(t: Tree, rounding: str = "floor") -> tuple[Tree, ApproximationReport]:
    d = reduce(t)
    lin = average_to_linear(d, rounding=rounding)
    approx = expand_linear(lin)
    delta = edit_distance_dag(d, from_linear(lin))
    return approx, ApproximationReport(size(t), size(approx), delta, height(t), height(approx))


def worst_case_bound(H: int, d: int) -> int:
    """floor(d/2) * ceil(d/2) * d**(H-2)."""
    if H < 2 or d < 1:
        raise ValueError(f"need H >= 2 and d >= 1, got H={H}, d={d}")
    return (d // 2) * ((d + 1) // 2) * d ** (H - 2)


def build_worst_case_tree(H: int, d: int) -> Tree:
    """Tree whose distance to every self-nested tree is large.

    The root carries ceil(d/2) copies of a pattern with floor(d/2) leaves per
    fringe vertex and floor(d/2) copies of a pattern with d leaves per fringe
    vertex.  Both patterns are full d-ary trees of height H - 2 whose leaves
    then receive their fringe leaves.
    """
    if H < 2 or d < 2:
        raise ValueError(f"need H >= 2 and d >= 2, got H={H}, d={d}")

    def pattern(fringe: int) -> Tree:
        t = Tree([Tree()] * fringe)
        for _ in range(H - 2):
            t = Tree([t] * d)
        return t

    a, b = pattern(d // 2), pattern(d)
    return Tree([a] * ((d + 1) // 2) + [b] * (d // 2))


def _candidate_count(max_h: int, max_label: int) -> int:
    # rows h1 >= 1: N(h1, h1-1) in 1..L, the other h1-1 labels in 0..L
    total, per_height = 1, 1
    for h1 in range(1, max_h + 1):
        per_height *= max_label * (max_label + 1) ** (h1 - 1)
        total += per_height
    return total


def min_self_nested_distance(t: Tree, max_h: int, max_label: int) -> tuple[int, LinearDag]:
    """Exhaustive minimum of the distance from ``t`` to self-nested trees.

    Candidates are all linear DAGs of height <= ``max_h`` whose labels are
    <= ``max_label``.  Ties go to the smallest ``(H, rows)`` in lexicographic
    order.  Refuses search spaces larger than ``SEARCH_GUARD``.
    """
    n_cand = _candidate_count(max_h, max_label)
    if n_cand > SEARCH_GUARD:
        raise GuardError(f"{n_cand} candidate linear DAGs exceed the guard of {SEARCH_GUARD}")
    d = reduce(t)
    sizes: dict = {}
    for u in d.vertices():
        sizes[u] = 1 + sum(n * sizes[v] for v, n in d.children(u))

    # a linear-DAG vertex is identified by its prefix of rows
    prefix_size: dict[tuple, int] = {(): 1}

    def lin_size(p: tuple) -> int:
        s = prefix_size.get(p)
        if s is None:
            s = 1 + sum(n * lin_size(p[:h2]) for h2, n in enumerate(p[-1]) if n)
            prefix_size[p] = s
        return s

    def lin_kids(p: tuple):
        if not p:
            return ()
        return tuple((p[:h2], n) for h2, n in enumerate(p[-1]) if n)

    dist = DagDistance(d.children, sizes.__getitem__, lin_kids, lin_size)
    root = d.root
    best: tuple[int, tuple] | None = None
    for H in range(max_h + 1):
        row_choices = [
            [
                r
                for r in itertools.product(range(max_label + 1), repeat=h1)
                if r[-1] >= 1
            ]
            for h1 in range(1, H + 1)
        ]
        for rows in itertools.product(*row_choices):
            c = dist(root, rows)
            if best is None or c < best[0]:
                best = (c, rows)
    return best[0], LinearDag(best[1])
