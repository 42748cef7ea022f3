"""Benchmarks behind the compression and timing trends.

Every experiment yields :class:`BenchRecord` rows; values are medians over
``reps`` repetitions.  CSV columns: ``experiment,kind,size,value,unit,reps``.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

from .bottomup import eval_dag, eval_tree, vertex_count
from .editdist import edit_distance, edit_distance_dag
from .errors import GenerationError
from .reduction import LinearDag, expand_linear, from_linear, linear_size, random_linear_dag, reduce
from .trees import random_tree

__all__ = [
    "BenchRecord",
    "random_self_nested",
    "bench_space",
    "bench_bottomup",
    "bench_distance",
    "records_to_csv",
    "EXPERIMENTS",
]

CSV_FIELDS = ("experiment", "kind", "size", "value", "unit", "reps")


@dataclass(frozen=True)
class BenchRecord:
    experiment: str
    kind: str
    size: int
    value: float
    unit: str
    reps: int


def random_self_nested(min_size: int, max_size: int, seed: int) -> LinearDag:
    """A random linear DAG whose expansion has a size in ``[min_size, max_size]``.

    The height is drawn in 3..6 per attempt; the outdegree bound for that
    height drifts up or down until the size lands in range.
    """
    rng = random.Random(seed)
    bound = {H: 2 for H in range(3, 7)}
    for _ in range(100_000):
        H = rng.randint(3, 6)
        try:
            l = random_linear_dag(H, bound[H], rng.getrandbits(32))
        except GenerationError:
            continue
        s = linear_size(l)
        if s < min_size:
            bound[H] += 1
        elif s > max_size:
            bound[H] = max(2, bound[H] - 1)
        else:
            return l
    raise GenerationError(f"no self-nested tree with size in [{min_size}, {max_size}]")


def _median_ns(fn: Callable[[], object], reps: int) -> float:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        times.append(time.perf_counter_ns() - t0)
    return float(statistics.median(times))


def bench_space(sizes: Sequence[int], reps: int, seed: int) -> list[BenchRecord]:
    """Serialized bytes of trees and of their DAG reductions.

    Self-nested trees are drawn with sizes in ``[n, 2n]``.
    """
    rng = random.Random(seed)
    out = []
    for n in sizes:
        acc: dict[str, list[float]] = {k: [] for k in ("tree", "dag", "sn_tree", "sn_dag", "ratio", "sn_ratio")}
        for _ in range(reps):
            t = random_tree(n, rng.getrandbits(32))
            tb, db = len(t.key) + 1, len(reduce(t).to_text())
            l = random_self_nested(n, 2 * n, rng.getrandbits(32))
            st = expand_linear(l)
            stb, sdb = len(st.key) + 1, len(reduce(st).to_text())
            for k, v in (("tree", tb), ("dag", db), ("sn_tree", stb), ("sn_dag", sdb)):
                acc[k].append(v)
            acc["ratio"].append(db / tb)
            acc["sn_ratio"].append(sdb / stb)
        for k, vals in acc.items():
            unit = "ratio" if k.endswith("ratio") else "bytes"
            out.append(BenchRecord("space", k, n, float(statistics.median(vals)), unit, reps))
    return out


def bench_bottomup(sizes: Sequence[int], reps: int, seed: int) -> list[BenchRecord]:
    """Time to evaluate the vertex count from trees, DAGs and linear DAGs."""
    rng = random.Random(seed)
    out = []
    for n in sizes:
        t = random_tree(n, rng.getrandbits(32))
        d = reduce(t)
        l = random_self_nested(n, 2 * n, rng.getrandbits(32))
        st = expand_linear(l)
        ld = from_linear(l)
        cases = {
            "tree": lambda: eval_tree(vertex_count, t),
            "dag": lambda: eval_dag(vertex_count, d),
            "sn_tree": lambda: eval_tree(vertex_count, st),
            "linear": lambda: eval_dag(vertex_count, ld),
        }
        for kind, fn in cases.items():
            out.append(BenchRecord("bottomup", kind, n, _median_ns(fn, reps), "ns", reps))
    return out


def bench_distance(sizes: Sequence[int], reps: int, seed: int) -> list[BenchRecord]:
    """Time of the edit distance from trees and from DAG reductions."""
    rng = random.Random(seed)
    out = []
    for n in sizes:
        a, b = (random_tree(n, rng.getrandbits(32)) for _ in range(2))
        sa, sb = (expand_linear(random_self_nested(n, 2 * n, rng.getrandbits(32))) for _ in range(2))
        da, db, dsa, dsb = reduce(a), reduce(b), reduce(sa), reduce(sb)
        cases = {
            "tree": lambda: edit_distance(a, b),
            "dag": lambda: edit_distance_dag(da, db),
            "sn_tree": lambda: edit_distance(sa, sb),
            "linear": lambda: edit_distance_dag(dsa, dsb),
        }
        for kind, fn in cases.items():
            out.append(BenchRecord("distance", kind, n, _median_ns(fn, reps), "ns", reps))
    return out


EXPERIMENTS = {"space": bench_space, "bottomup": bench_bottomup, "distance": bench_distance}


def records_to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in records:
        w.writerow([r.experiment, r.kind, r.size, r.value, r.unit, r.reps])
    return buf.getvalue()
