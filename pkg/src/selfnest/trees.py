"""Unordered rooted trees.

A :class:`Tree` is an immutable node holding a tuple of child trees.  Sibling
order carries no meaning: equality and hashing go through the AHU-style
canonical key, so two trees compare equal iff they are isomorphic.

Text format (also the on-disk format, one tree per line)::

    Tree := "(" Tree* ")"

Whitespace is ignored.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Iterator

from .errors import ParseError

__all__ = [
    "Tree",
    "parse",
    "canonical_key",
    "is_isomorphic",
    "random_tree",
    "size",
    "height",
    "outdegree",
    "leaf_count",
    "child_forest",
    "subtrees",
    "LEAF",
]


class Tree:
    __slots__ = ("children", "_key", "_size", "_height", "_outdegree", "_leaves")

    def __init__(self, children: Iterable[Tree] = ()):
        self.children: tuple[Tree, ...] = tuple(children)
        self._key: str | None = None
        self._size: int | None = None
        self._height: int | None = None
        self._outdegree: int | None = None
        self._leaves: int | None = None

    def __setattr__(self, name, value):
        if name == "children" and hasattr(self, "children"):
            raise AttributeError("Tree is immutable")
        object.__setattr__(self, name, value)

    @property
    def key(self) -> str:
        if self._key is None:
            _fill_stats(self)
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self is other or self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        k = self.key
        if len(k) > 60:
            k = k[:57] + "..."
        return f"Tree({k!r})"

    def __str__(self):
        return self.key


LEAF = Tree()


def _unfilled_postorder(t: Tree) -> Iterator[Tree]:
    # Children before parents; skips already-filled subtrees, which also makes
    # shared nodes (from DAG expansion) cost O(1) after their first visit.
    if t._key is not None:
        return
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if node._key is not None:
            continue
        if expanded:
            yield node
            continue
        stack.append((node, True))
        for c in node.children:
            if c._key is None:
                stack.append((c, False))


def _fill_stats(t: Tree) -> None:
    for node in _unfilled_postorder(t):
        kids = node.children
        if not kids:
            node._key = "()"
            node._size, node._height, node._outdegree, node._leaves = 1, 0, 0, 1
            continue
        node._key = "(" + "".join(sorted(c._key for c in kids)) + ")"
        node._size = 1 + sum(c._size for c in kids)
        node._height = 1 + max(c._height for c in kids)
        node._outdegree = max(len(kids), max(c._outdegree for c in kids))
        node._leaves = sum(c._leaves for c in kids)


def parse(text: str) -> Tree:
    """Parse one tree from its parenthesised text form."""
    stack: list[list[Tree]] = []
    result: Tree | None = None
    for pos, ch in enumerate(text):
        if ch.isspace():
            continue
        if result is not None:
            raise ParseError("trailing characters after tree", pos)
        if ch == "(":
            stack.append([])
        elif ch == ")":
            if not stack:
                raise ParseError("unbalanced ')'", pos)
            node = Tree(stack.pop())
            if stack:
                stack[-1].append(node)
            else:
                result = node
        else:
            raise ParseError(f"unexpected character {ch!r}", pos)
    if result is None:
        if not stack:
            raise ParseError("empty input", len(text))
        raise ParseError("unbalanced '('", len(text))
    return result


def canonical_key(t: Tree) -> str:
    """Encoding equal for two trees iff they are isomorphic.

    A leaf is ``"()"``; an internal vertex wraps the concatenation of its
    children's keys, sorted ascending with ``"(" < ")"``.
    """
    return t.key


def is_isomorphic(t1: Tree, t2: Tree) -> bool:
    return t1.key == t2.key


def random_tree(n: int, seed: int) -> Tree:
    """Grow a tree from a single vertex by ``n - 1`` uniform leaf attachments.

    Each step picks an existing vertex uniformly at random (``random.Random``
    seeded with ``seed``) and gives it a new leaf child.
    """
    if n < 1:
        raise ValueError(f"random_tree needs n >= 1, got {n}")
    rng = random.Random(seed)
    parent = [-1]
    for v in range(1, n):
        parent.append(rng.randrange(v))
    kids: list[list[Tree]] = [[] for _ in range(n)]
    nodes: list[Tree | None] = [None] * n
    # parents always precede children, so descending index is a valid post-order
    for v in range(n - 1, -1, -1):
        nodes[v] = Tree(kids[v])
        if v:
            kids[parent[v]].append(nodes[v])
    return nodes[0]


def size(t: Tree) -> int:
    if t._size is None:
        _fill_stats(t)
    return t._size


def height(t: Tree) -> int:
    if t._height is None:
        _fill_stats(t)
    return t._height


def outdegree(t: Tree) -> int:
    """Maximal number of children over all vertices."""
    if t._outdegree is None:
        _fill_stats(t)
    return t._outdegree


def leaf_count(t: Tree) -> int:
    if t._leaves is None:
        _fill_stats(t)
    return t._leaves


def child_forest(t: Tree) -> list[Tree]:
    """Subtrees rooted at the children of the root, in canonical-key order."""
    return sorted(t.children, key=canonical_key)


def subtrees(t: Tree) -> Iterator[Tree]:
    """Every subtree of ``t`` (one per vertex, shared nodes visited each time)."""
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children)
