"""Integer min-cost max-flow.

The solver is successive shortest augmenting paths with Johnson potentials.
Costs are nonnegative, so zero potentials are feasible from the start and
every shortest-path search is a Dijkstra on reduced costs.  All arithmetic
is on Python ints.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .errors import GuardError

__all__ = [
    "Arc",
    "FlowNetwork",
    "FlowResult",
    "min_cost_max_flow",
    "assignment_oracle",
    "check_flow",
    "ORACLE_MAX_SOURCE_CAPACITY",
]

ORACLE_MAX_SOURCE_CAPACITY = 10


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: int
    cost: int


@dataclass
class FlowNetwork:
    n_nodes: int
    source: int
    sink: int
    arcs: list[Arc] = field(default_factory=list)

    def add_arc(self, tail: int, head: int, capacity: int, cost: int = 0) -> int:
        self.arcs.append(Arc(tail, head, capacity, cost))
        return len(self.arcs) - 1

    def validate(self) -> None:
        n = self.n_nodes
        if not (0 <= self.source < n and 0 <= self.sink < n) or self.source == self.sink:
            raise ValueError("source and sink must be distinct existing nodes")
        for k, a in enumerate(self.arcs):
            if not (0 <= a.tail < n and 0 <= a.head < n):
                raise ValueError(f"arc {k} references an unknown node")
            if a.capacity < 0 or a.cost < 0:
                raise ValueError(f"arc {k} has negative capacity or cost")


@dataclass(frozen=True)
class FlowResult:
    value: int
    cost: int
    flows: tuple[int, ...]


def min_cost_max_flow(net: FlowNetwork) -> FlowResult:
    net.validate()
    n, s, t = net.n_nodes, net.source, net.sink
    # residual arc 2k is arc k, 2k+1 its reverse
    head: list[int] = []
    cap: list[int] = []
    cost: list[int] = []
    out: list[list[int]] = [[] for _ in range(n)]
    for a in net.arcs:
        out[a.tail].append(len(head))
        head.append(a.head)
        cap.append(a.capacity)
        cost.append(a.cost)
        out[a.head].append(len(head))
        head.append(a.tail)
        cap.append(0)
        cost.append(-a.cost)

    potential = [0] * n
    value = total = 0
    while True:
        dist: list[int | None] = [None] * n
        via = [-1] * n
        dist[s] = 0
        heap = [(0, s)]
        done = [False] * n
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            pu = potential[u]
            for e in out[u]:
                if cap[e] <= 0:
                    continue
                v = head[e]
                if done[v]:
                    continue
                nd = du + cost[e] + pu - potential[v]
                if dist[v] is None or nd < dist[v]:
                    dist[v] = nd
                    via[v] = e
                    heapq.heappush(heap, (nd, v))
        if dist[t] is None:
            break
        for v in range(n):
            if dist[v] is not None:
                potential[v] += dist[v]
        push = None
        v = t
        while v != s:
            e = via[v]
            push = cap[e] if push is None else min(push, cap[e])
            v = head[e ^ 1]
        v = t
        while v != s:
            e = via[v]
            cap[e] -= push
            cap[e ^ 1] += push
            total += push * cost[e]
            v = head[e ^ 1]
        value += push
    flows = tuple(cap[2 * k + 1] for k in range(len(net.arcs)))
    return FlowResult(value, total, flows)


def check_flow(net: FlowNetwork, result: FlowResult) -> None:
    """Raise ``AssertionError`` unless ``result`` is a feasible min-cost flow.

    Checks capacity bounds, conservation, the reported value and cost, and
    that the residual network has no negative-cost cycle (Bellman-Ford).
    """
    n = net.n_nodes
    balance = [0] * n
    for a, f in zip(net.arcs, result.flows, strict=True):
        assert 0 <= f <= a.capacity, f"flow {f} outside [0, {a.capacity}]"
        balance[a.tail] -= f
        balance[a.head] += f
    for v in range(n):
        if v not in (net.source, net.sink):
            assert balance[v] == 0, f"conservation violated at node {v}"
    assert balance[net.sink] == result.value == -balance[net.source]
    assert result.cost == sum(a.cost * f for a, f in zip(net.arcs, result.flows))

    residual = []
    for a, f in zip(net.arcs, result.flows):
        if f < a.capacity:
            residual.append((a.tail, a.head, a.cost))
        if f > 0:
            residual.append((a.head, a.tail, -a.cost))
    dist = [0] * n
    for _ in range(n):
        changed = False
        for u, v, c in residual:
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                changed = True
        if not changed:
            return
    raise AssertionError("residual network has a negative-cost cycle")


def _simple_paths(net: FlowNetwork) -> list[tuple[int, ...]]:
    out: list[list[int]] = [[] for _ in range(net.n_nodes)]
    for k, a in enumerate(net.arcs):
        if a.capacity > 0:
            out[a.tail].append(k)
    paths = []

    def walk(u, seen, arcs):
        if u == net.sink:
            paths.append(tuple(arcs))
            return
        for k in out[u]:
            v = net.arcs[k].head
            if v not in seen:
                seen.add(v)
                arcs.append(k)
                walk(v, seen, arcs)
                arcs.pop()
                seen.discard(v)

    walk(net.source, {net.source}, [])
    return paths


def assignment_oracle(net: FlowNetwork) -> int:
    """Minimum cost among maximum flows, by exhaustive enumeration.

    Every integral flow without circulations is a sum of unit flows along
    simple source-sink paths of the original network, so breadth-first
    unit augmentation over forward arcs reaches all of them.  Circulations
    only add nonnegative cost and can be ignored.
    """
    net.validate()
    supply = sum(a.capacity for a in net.arcs if a.tail == net.source)
    if supply > ORACLE_MAX_SOURCE_CAPACITY:
        raise GuardError(
            f"source capacity {supply} exceeds oracle guard {ORACLE_MAX_SOURCE_CAPACITY}"
        )
    paths = _simple_paths(net)
    path_cost = [sum(net.arcs[k].cost for k in p) for p in paths]
    caps = [a.capacity for a in net.arcs]
    layer = {tuple([0] * len(caps)): 0}
    while True:
        nxt: dict[tuple[int, ...], int] = {}
        for state, c in layer.items():
            for p, pc in zip(paths, path_cost):
                if all(state[k] < caps[k] for k in p):
                    s = list(state)
                    for k in p:
                        s[k] += 1
                    key = tuple(s)
                    if key not in nxt or c + pc < nxt[key]:
                        nxt[key] = c + pc
        if not nxt:
            return min(layer.values())
        layer = nxt
