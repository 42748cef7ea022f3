"""DAG reduction of unordered trees and linear DAGs of self-nested trees.

Vertices of a :class:`DagReduction` are ``(height, index)`` pairs with a
1-based index.  Within one height, classes are numbered by ascending
canonical key of the subtree they stand for.

DAG text format::

    dag H=<H>
    m <h> <M_h>                  # one line per height 0..H
    e <h1>.<i1> <h2>.<i2> <N>    # one line per edge
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field
from collections.abc import Iterator

from .errors import GenerationError, ParseError
from .trees import Tree, canonical_key, height, subtrees

__all__ = [
    "Vertex",
    "DagReduction",
    "LinearDag",
    "reduce",
    "expand",
    "multiplicities",
    "height_profile",
    "is_linear",
    "is_self_nested_profile",
    "is_self_nested_naive",
    "to_linear",
    "from_linear",
    "linear_size",
    "expand_linear",
    "random_linear_dag",
    "MAX_REJECTIONS",
]

Vertex = tuple[int, int]

MAX_REJECTIONS = 10_000


@dataclass(frozen=True)
class DagReduction:
    levels: tuple[int, ...]
    """``levels[h]`` is the number of classes M_h at height h."""
    edges: dict[tuple[Vertex, Vertex], int]
    _children: dict[Vertex, tuple[tuple[Vertex, int], ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self):
        kids: dict[Vertex, list[tuple[Vertex, int]]] = defaultdict(list)
        for (u, v), n in self.edges.items():
            if not (self._has(u) and self._has(v)):
                raise ValueError(f"edge {u}->{v} references an unknown vertex")
            if v[0] >= u[0]:
                raise ValueError(f"edge {u}->{v} does not go to a lower height")
            if n < 1:
                raise ValueError(f"edge {u}->{v} has label {n} < 1")
            kids[u].append((v, n))
        for u in self.vertices():
            if u[0] >= 1 and not any(v[0] == u[0] - 1 for v, _ in kids.get(u, ())):
                raise ValueError(f"vertex {u} has no child at height {u[0] - 1}")
        object.__setattr__(
            self, "_children", {u: tuple(sorted(kids.get(u, ()))) for u in self.vertices()}
        )

    def _has(self, v: Vertex) -> bool:
        h, i = v
        return 0 <= h < len(self.levels) and 1 <= i <= self.levels[h]

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def vertices(self) -> Iterator[Vertex]:
        """All vertices by increasing height, then index."""
        for h, m in enumerate(self.levels):
            for i in range(1, m + 1):
                yield (h, i)

    def __len__(self):
        return sum(self.levels)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def children(self, v: Vertex) -> tuple[tuple[Vertex, int], ...]:
        try:
            return self._children[v]
        except KeyError:
            raise KeyError(f"unknown DAG vertex {v}") from None

    def roots(self) -> list[Vertex]:
        has_parent = {v for _, v in self.edges}
        return [v for v in self.vertices() if v not in has_parent]

    @property
    def root(self) -> Vertex:
        roots = self.roots()
        if len(roots) != 1:
            raise ValueError(f"DAG has {len(roots)} roots, expected exactly one")
        return roots[0]

    def to_text(self) -> str:
        lines = [f"dag H={self.height}"]
        lines += [f"m {h} {m}" for h, m in enumerate(self.levels)]
        for (u, v), n in sorted(self.edges.items(), key=lambda e: (-e[0][0][0], e[0])):
            lines.append(f"e {u[0]}.{u[1]} {v[0]}.{v[1]} {n}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> DagReduction:
        lines = text.splitlines()
        offset = 0
        levels: dict[int, int] = {}
        edges: dict[tuple[Vertex, Vertex], int] = {}
        H = None
        for line in lines:
            parts = line.split()
            try:
                if not parts:
                    pass
                elif H is None:
                    if parts[0] != "dag" or len(parts) != 2 or not parts[1].startswith("H="):
                        raise ValueError("expected header 'dag H=<H>'")
                    H = int(parts[1][2:])
                elif parts[0] == "m" and len(parts) == 3:
                    levels[int(parts[1])] = int(parts[2])
                elif parts[0] == "e" and len(parts) == 4:
                    edges[(_vertex(parts[1]), _vertex(parts[2]))] = int(parts[3])
                else:
                    raise ValueError(f"unrecognised line {line!r}")
            except ValueError as exc:
                raise ParseError(str(exc), offset) from None
            offset += len(line) + 1
        if H is None:
            raise ParseError("missing 'dag' header", 0)
        if sorted(levels) != list(range(H + 1)):
            raise ParseError(f"expected one 'm' line per height 0..{H}", offset)
        try:
            return cls(tuple(levels[h] for h in range(H + 1)), edges)
        except ValueError as exc:
            raise ParseError(str(exc), offset) from None


def _vertex(s: str) -> Vertex:
    h, _, i = s.partition(".")
    return (int(h), int(i))


def reduce(t: Tree) -> DagReduction:
    """Quotient of ``t`` by subtree isomorphism (bottom-up hash-consing)."""
    # class signature -> provisional id; node identity -> provisional id
    sig_ids: dict[tuple, int] = {}
    node_cls: dict[int, int] = {}
    cls_height: list[int] = []
    cls_kids: list[tuple[tuple[int, int], ...]] = []
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in node_cls:
            continue
        if not expanded:
            stack.append((node, True))
            stack.extend((c, False) for c in node.children if id(c) not in node_cls)
            continue
        counts: dict[int, int] = defaultdict(int)
        for c in node.children:
            counts[node_cls[id(c)]] += 1
        sig = tuple(sorted(counts.items()))
        cid = sig_ids.get(sig)
        if cid is None:
            cid = sig_ids[sig] = len(cls_height)
            cls_height.append(1 + max((cls_height[c] for c, _ in sig), default=-1))
            cls_kids.append(sig)
        node_cls[id(node)] = cid

    # canonical keys give a reproducible numbering inside each height
    keys: list[str] = []
    for sig in cls_kids:  # provisional ids are already in bottom-up order
        keys.append("(" + "".join(sorted(keys[c] * n for c, n in sig)) + ")")
    by_height: dict[int, list[int]] = defaultdict(list)
    for cid, h in enumerate(cls_height):
        by_height[h].append(cid)
    H = max(by_height)
    vid: dict[int, Vertex] = {}
    for h in range(H + 1):
        for i, cid in enumerate(sorted(by_height[h], key=keys.__getitem__), start=1):
            vid[cid] = (h, i)
    edges = {(vid[cid], vid[c]): n for cid, sig in enumerate(cls_kids) for c, n in sig}
    return DagReduction(tuple(len(by_height[h]) for h in range(H + 1)), edges)


def expand(d: DagReduction, v: Vertex | None = None) -> Tree:
    """Rebuild the tree a DAG vertex stands for (default: the root).

    Equal classes become the same ``Tree`` object; trees are immutable, so
    the sharing is invisible.
    """
    if v is None:
        v = d.root
    d.children(v)  # validates v
    built: dict[Vertex, Tree] = {}
    for u in d.vertices():
        if u[0] > v[0]:
            break
        built[u] = Tree(built[c] for c, n in d.children(u) for _ in range(n))
    return built[v]


def multiplicities(d: DagReduction) -> dict[Vertex, int]:
    """Occurrence count of each class as a subtree of the whole tree.

    mu(root) = 1 and mu(u) = sum over in-edges w->u of N(w, u) * mu(w).
    """
    root = d.root
    mu: dict[Vertex, int] = {v: 0 for v in d.vertices()}
    mu[root] = 1
    for u in sorted(d.vertices(), reverse=True):
        for v, n in d.children(u):
            mu[v] += n * mu[u]
    return mu


def height_profile(d: DagReduction) -> dict[Vertex, dict[int, int]]:
    """nu[(h1, i)][h2]: number of height-h2 children under class (h1, i)."""
    nu: dict[Vertex, dict[int, int]] = {}
    for u in d.vertices():
        row: dict[int, int] = defaultdict(int)
        for v, n in d.children(u):
            row[v[0]] += n
        nu[u] = dict(row)
    return nu


def is_linear(d: DagReduction) -> bool:
    return all(m == 1 for m in d.levels)


def is_self_nested_profile(d: DagReduction) -> bool:
    """True iff the height profile is constant across classes of each height."""
    nu = height_profile(d)
    for h1, m in enumerate(d.levels):
        rows = [nu[(h1, i)] for i in range(1, m + 1)]
        if any(r != rows[0] for r in rows[1:]):
            return False
    return True


def is_self_nested_naive(t: Tree) -> bool:
    """Definitional check: all subtrees of equal height are isomorphic."""
    seen: dict[int, str] = {}
    visited: set[int] = set()
    for s in subtrees(t):
        if id(s) in visited:
            continue
        visited.add(id(s))
        k = canonical_key(s)
        if seen.setdefault(height(s), k) != k:
            return False
    return True


@dataclass(frozen=True)
class LinearDag:
    """Linear DAG of a self-nested tree of height ``H``.

    ``rows[h1 - 1][h2]`` is the label N(h1, h2) for 0 <= h2 < h1 <= H.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))
        for h1, row in enumerate(self.rows, start=1):
            if len(row) != h1:
                raise ValueError(f"row {h1} has {len(row)} labels, expected {h1}")
            if any(n < 0 for n in row):
                raise ValueError(f"row {h1} has a negative label")
            if row[-1] < 1:
                raise ValueError(f"N({h1},{h1 - 1}) must be >= 1")

    @property
    def H(self) -> int:
        return len(self.rows)

    def N(self, h1: int, h2: int) -> int:
        return self.rows[h1 - 1][h2]


def to_linear(d: DagReduction) -> LinearDag:
    if not is_linear(d):
        raise ValueError("DAG is not linear")
    return LinearDag(
        tuple(
            tuple(d.edges.get(((h1, 1), (h2, 1)), 0) for h2 in range(h1))
            for h1 in range(1, d.height + 1)
        )
    )


def from_linear(l: LinearDag) -> DagReduction:
    edges = {
        ((h1, 1), (h2, 1)): n
        for h1, row in enumerate(l.rows, start=1)
        for h2, n in enumerate(row)
        if n
    }
    return DagReduction((1,) * (l.H + 1), edges)


def linear_size(l: LinearDag) -> int:
    """s(0) = 1, s(h1) = 1 + sum N(h1, h2) s(h2); returns s(H)."""
    s = [1]
    for row in l.rows:
        s.append(1 + sum(n * sh for n, sh in zip(row, s)))
    return s[-1]


def expand_linear(l: LinearDag) -> Tree:
    levels = [Tree()]
    for row in l.rows:
        levels.append(Tree(levels[h2] for h2, n in enumerate(row) for _ in range(n)))
    return levels[-1]


def random_linear_dag(H: int, d: int, seed: int) -> LinearDag:
    """Draw each row uniformly among admissible rows by rejection.

    A row h1 is admissible when its labels sum to at most ``d`` and
    N(h1, h1 - 1) >= 1.  Candidates are uniform on ``{0..d}^h1``.
    """
    if H < 0 or d < 1:
        raise ValueError(f"need H >= 0 and d >= 1, got H={H}, d={d}")
    rng = random.Random(seed)
    rows = []
    for h1 in range(1, H + 1):
        for _ in range(MAX_REJECTIONS):
            row = [rng.randint(0, d) for _ in range(h1)]
            if row[-1] >= 1 and sum(row) <= d:
                rows.append(tuple(row))
                break
        else:
            raise GenerationError(
                f"row {h1}: {MAX_REJECTIONS} consecutive rejections (H={H}, d={d})"
            )
    return LinearDag(tuple(rows))
