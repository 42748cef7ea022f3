"""Constrained edit distance between unordered trees.

Only leaf insertions and leaf deletions are allowed, each at unit cost.  The
distance follows a recursion over the child forests of the two roots: as
many subtrees as possible are matched one-to-one (cost: their distance), the
rest are deleted or inserted whole (cost: their size).  Each recursion step
is a min-cost max-flow problem.

``None`` plays the role of the empty tree.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Hashable, Sequence

from .errors import GuardError
from .flow import FlowNetwork, FlowResult, min_cost_max_flow
from .reduction import DagReduction
from .trees import Tree, child_forest, outdegree, size

__all__ = [
    "EMPTY",
    "edit_distance",
    "edit_distance_dag",
    "brute_force_distance",
    "step_network",
    "DagDistance",
    "BRUTE_FORCE_MAX_CHILDREN",
]

EMPTY = None
BRUTE_FORCE_MAX_CHILDREN = 6

StepHook = Callable[[FlowNetwork, FlowResult], None]


def step_network(
    left: Sequence[tuple[int, int]],
    right: Sequence[tuple[int, int]],
    pair_cost: Callable[[int, int], int],
) -> FlowNetwork:
    """Network whose min-cost max-flow cost is one recursion step.

    ``left`` and ``right`` hold ``(size, multiplicity)`` for each distinct
    subtree of the two child forests; ``pair_cost(i, j)`` is the distance
    between ``left[i]`` and ``right[j]``.  The empty node of the first
    forest supplies insertions for the surplus of the second, and the empty
    node of the second absorbs deletions from the surplus of the first.
    """
    eta1 = sum(m for _, m in left)
    eta2 = sum(m for _, m in right)
    n = min(eta1, eta2)
    src, sink, empty1, empty2 = 0, 1, 2, 3
    base_r = 4 + len(left)
    net = FlowNetwork(base_r + len(right), src, sink)
    net.add_arc(src, empty1, eta2 - n)
    for i, (sz, m) in enumerate(left):
        net.add_arc(src, 4 + i, m)
        for j in range(len(right)):
            net.add_arc(4 + i, base_r + j, m, pair_cost(i, j))
        net.add_arc(4 + i, empty2, m, sz)
    for j, (sz, m) in enumerate(right):
        net.add_arc(empty1, base_r + j, m, sz)
        net.add_arc(base_r + j, sink, m)
    net.add_arc(empty2, sink, eta1 - n)
    return net


def _solve(net: FlowNetwork, hook: StepHook | None) -> int:
    res = min_cost_max_flow(net)
    if hook is not None:
        hook(net, res)
    return res.cost


def edit_distance(t1: Tree | None, t2: Tree | None, *, on_step: StepHook | None = None) -> int:
    """Distance computed on the trees, one network node per child subtree.

    Subproblems are memoised on canonical-key pairs.
    """
    if t1 is None or t2 is None:
        return (size(t1) if t1 is not None else 0) + (size(t2) if t2 is not None else 0)
    memo: dict[tuple[str, str], int] = {}

    def delta(a: Tree, b: Tree) -> int:
        ka, kb = a.key, b.key
        if ka == kb:
            return 0
        if (ka, kb) in memo:
            return memo[ka, kb]
        if not a.children or not b.children:
            # nothing to match: every child subtree is deleted or inserted
            d = size(a) + size(b) - 2
        else:
            fa, fb = child_forest(a), child_forest(b)
            costs = [[delta(x, y) for y in fb] for x in fa]
            net = step_network(
                [(size(x), 1) for x in fa], [(size(y), 1) for y in fb], lambda i, j: costs[i][j]
            )
            d = _solve(net, on_step)
        memo[ka, kb] = memo[kb, ka] = d
        return d

    return delta(t1, t2)


class DagDistance:
    """Memoised distance between vertices of two DAG-like structures.

    Each side is described by ``kids(v) -> [(child, multiplicity), ...]`` and
    ``size(v) -> int`` (size of the expanded subtree).  Vertices only need to
    be hashable, so one instance can be reused across many queries sharing
    the same vertex universe.
    """

    def __init__(
        self,
        kids1: Callable[[Hashable], Sequence[tuple[Hashable, int]]],
        size1: Callable[[Hashable], int],
        kids2: Callable[[Hashable], Sequence[tuple[Hashable, int]]],
        size2: Callable[[Hashable], int],
        on_step: StepHook | None = None,
    ):
        self.kids1, self.size1 = kids1, size1
        self.kids2, self.size2 = kids2, size2
        self.on_step = on_step
        self.memo: dict[tuple[Hashable, Hashable], int] = {}

    def __call__(self, u, v) -> int:
        key = (u, v)
        d = self.memo.get(key)
        if d is not None:
            return d
        ku, kv = self.kids1(u), self.kids2(v)
        if not ku or not kv:
            d = self.size1(u) + self.size2(v) - 2
        else:
            costs = [[self(a, b) for b, _ in kv] for a, _ in ku]
            net = step_network(
                [(self.size1(a), m) for a, m in ku],
                [(self.size2(b), m) for b, m in kv],
                lambda i, j: costs[i][j],
            )
            d = _solve(net, self.on_step)
        self.memo[key] = d
        return d


def _vertex_sizes(d: DagReduction) -> dict:
    sizes = {}
    for u in d.vertices():
        sizes[u] = 1 + sum(n * sizes[v] for v, n in d.children(u))
    return sizes


def edit_distance_dag(
    d1: DagReduction, d2: DagReduction, *, on_step: StepHook | None = None
) -> int:
    """Distance computed on DAG reductions.

    Network nodes are child classes with their edge labels as capacities, so
    repeated subtrees cost nothing extra.
    """
    r1, r2 = d1.root, d2.root
    s1, s2 = _vertex_sizes(d1), _vertex_sizes(d2)
    solver = DagDistance(d1.children, s1.__getitem__, d2.children, s2.__getitem__, on_step)
    return solver(r1, r2)


def brute_force_distance(t1: Tree | None, t2: Tree | None) -> int:
    """Reference distance by explicit enumeration of every child matching.

    For each step, tries every n-subset of each child forest (n the smaller
    forest size) and every bijection between the two subsets.  Refuses
    trees with a vertex of more than ``BRUTE_FORCE_MAX_CHILDREN`` children.
    """
    for t in (t1, t2):
        if t is not None and outdegree(t) > BRUTE_FORCE_MAX_CHILDREN:
            raise GuardError(
                f"brute force limited to {BRUTE_FORCE_MAX_CHILDREN} children per vertex"
            )
    memo: dict[tuple[str, str], int] = {}

    def delta(a: Tree | None, b: Tree | None) -> int:
        if a is None or b is None:
            return (size(a) if a is not None else 0) + (size(b) if b is not None else 0)
        key = (a.key, b.key)
        if key in memo:
            return memo[key]
        fa, fb = list(a.children), list(b.children)
        n = min(len(fa), len(fb))
        best = None
        for ia in itertools.combinations(range(len(fa)), n):
            rest_a = sum(size(fa[i]) for i in range(len(fa)) if i not in ia)
            for ib in itertools.combinations(range(len(fb)), n):
                rest_b = sum(size(fb[j]) for j in range(len(fb)) if j not in ib)
                for perm in itertools.permutations(ib):
                    c = rest_a + rest_b + sum(delta(fa[i], fb[j]) for i, j in zip(ia, perm))
                    if best is None or c < best:
                        best = c
        memo[key] = best
        return best

    return delta(t1, t2)

