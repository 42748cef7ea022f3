"""Fast edit-distance prediction from self-nested approximations.

The raw estimate is the distance between the two averaging approximations,
which is cheap because both are linear DAGs.  A linear model fitted by
ordinary least squares corrects it using size, height, outdegree and
Strahler number of the original trees and of their approximations.
"""

from __future__ import annotations

import csv
import io
import random
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .approx import average_to_linear
from .bottomup import eval_dag, height_fn, strahler, vertex_count
from .editdist import edit_distance_dag
from .reduction import DagReduction, from_linear, reduce
from .trees import Tree, random_tree

__all__ = [
    "FEATURE_NAMES",
    "BASELINE_FEATURES",
    "FeatureVector",
    "Row",
    "LinearModel",
    "ErrorSummary",
    "make_features",
    "generate_dataset",
    "fit_ols",
    "predict",
    "relative_errors",
    "evaluate",
    "raw_model",
    "write_dataset",
    "read_dataset",
]

_STATS = ("size", "height", "outdegree", "strahler")
_TREES = ("t1", "t2", "t1hat", "t2hat")
FEATURE_NAMES: tuple[str, ...] = ("delta_hat",) + tuple(
    f"{t}_{s}" for t in _TREES for s in _STATS
)
# regressors that do not depend on the approximations
BASELINE_FEATURES: tuple[str, ...] = tuple(f"{t}_{s}" for t in ("t1", "t2") for s in _STATS)

RIDGE = 1e-8


@dataclass(frozen=True)
class FeatureVector:
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(FEATURE_NAMES):
            raise ValueError(f"expected {len(FEATURE_NAMES)} features, got {len(self.values)}")

    def __getitem__(self, name: str) -> float:
        return self.values[FEATURE_NAMES.index(name)]

    def select(self, names: Sequence[str]) -> tuple[float, ...]:
        return tuple(self[n] for n in names)


@dataclass(frozen=True)
class Row:
    features: FeatureVector
    delta_true: int


def _dag_stats(d: DagReduction) -> tuple[int, int, int, int]:
    outdeg = max((sum(n for _, n in d.children(u)) for u in d.vertices()), default=0)
    return (
        eval_dag(vertex_count, d),
        eval_dag(height_fn, d),
        outdeg,
        eval_dag(strahler, d),
    )


def _features_from_dags(d1: DagReduction, d2: DagReduction) -> FeatureVector:
    a1, a2 = from_linear(average_to_linear(d1)), from_linear(average_to_linear(d2))
    delta_hat = edit_distance_dag(a1, a2)
    stats = [s for d in (d1, d2, a1, a2) for s in _dag_stats(d)]
    return FeatureVector(tuple(float(x) for x in (delta_hat, *stats)))


def make_features(t1: Tree, t2: Tree) -> FeatureVector:
    return _features_from_dags(reduce(t1), reduce(t2))


def generate_dataset(pairs: int, size_lo: int, size_hi: int, seed: int) -> list[Row]:
    """Random tree pairs with sizes drawn uniformly in ``[size_lo, size_hi]``."""
    if size_lo < 2 or size_hi < size_lo:
        raise ValueError(f"bad size range [{size_lo}, {size_hi}]")
    if pairs < 0:
        raise ValueError("pairs must be nonnegative")
    rng = random.Random(seed)
    rows = []
    for _ in range(pairs):
        trees = [
            random_tree(rng.randint(size_lo, size_hi), rng.getrandbits(64)) for _ in range(2)
        ]
        d1, d2 = reduce(trees[0]), reduce(trees[1])
        rows.append(Row(_features_from_dags(d1, d2), edit_distance_dag(d1, d2)))
    return rows


@dataclass(frozen=True)
class LinearModel:
    feature_names: tuple[str, ...]
    coefficients: tuple[float, ...]
    """``coefficients[0]`` is the intercept."""
    n_rows: int = 0
    seed: int | None = None
    ridge: bool = False

    def __post_init__(self):
        if len(self.coefficients) != len(self.feature_names) + 1:
            raise ValueError("need one coefficient per feature plus an intercept")

    def to_text(self) -> str:
        lines = [f"model v1 n={self.n_rows} seed={self.seed}"]
        for name, c in zip(("intercept", *self.feature_names), self.coefficients):
            lines.append(f"{name} {c!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> LinearModel:
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split() if lines else []
        if len(head) != 4 or head[:2] != ["model", "v1"]:
            raise ValueError("model file must start with 'model v1 n=<rows> seed=<seed>'")
        meta = dict(p.split("=", 1) for p in head[2:])
        names, coefs = [], []
        for ln in lines[1:]:
            name, value = ln.split()
            names.append(name)
            coefs.append(float(value))
        if not names or names[0] != "intercept":
            raise ValueError("first coefficient must be the intercept")
        seed = None if meta["seed"] == "None" else int(meta["seed"])
        return cls(tuple(names[1:]), tuple(coefs), int(meta["n"]), seed)


def _design(rows: Sequence[Row], names: Sequence[str]) -> np.ndarray:
    X = np.ones((len(rows), len(names) + 1))
    for r, row in enumerate(rows):
        X[r, 1:] = row.features.select(names)
    return X


def fit_ols(
    rows: Sequence[Row], names: Sequence[str] = FEATURE_NAMES, seed: int | None = None
) -> LinearModel:
    """Least squares through the normal equations ``X'X b = X'y``.

    A numerically singular Gram matrix gets a ``1e-8`` ridge, flagged on the
    returned model.
    """
    p = len(names) + 1
    if len(rows) < 2 * p:
        raise ValueError(f"need at least {2 * p} rows to fit {p} coefficients, got {len(rows)}")
    X = _design(rows, names)
    y = np.array([row.delta_true for row in rows], dtype=float)
    gram = X.T @ X
    ridge = np.linalg.matrix_rank(gram) < p or np.linalg.cond(gram) > 1e14
    if ridge:
        gram = gram + RIDGE * np.eye(p)
    beta = np.linalg.solve(gram, X.T @ y)
    return LinearModel(tuple(names), tuple(float(b) for b in beta), len(rows), seed, ridge)


def predict(model: LinearModel, features: FeatureVector) -> float:
    x = features.select(model.feature_names)
    return model.coefficients[0] + float(np.dot(model.coefficients[1:], x))


def relative_errors(model: LinearModel, rows: Iterable[Row]) -> tuple[np.ndarray, int]:
    """(prediction - truth) / truth per row, plus the count of skipped δ=0 rows."""
    errs, skipped = [], 0
    for row in rows:
        if row.delta_true == 0:
            skipped += 1
            continue
        errs.append((predict(model, row.features) - row.delta_true) / row.delta_true)
    return np.array(errs), skipped


@dataclass(frozen=True)
class ErrorSummary:
    mean: float
    median: float
    q1: float
    q3: float
    n: int
    excluded: int = 0

    @classmethod
    def from_errors(cls, errs: np.ndarray, excluded: int = 0) -> ErrorSummary:
        if len(errs) == 0:
            raise ValueError("no rows with nonzero distance")
        q1, med, q3 = np.percentile(errs, [25, 50, 75])
        return cls(float(errs.mean()), float(med), float(q1), float(q3), len(errs), excluded)


def evaluate(model: LinearModel, rows: Sequence[Row]) -> ErrorSummary:
    return ErrorSummary.from_errors(*relative_errors(model, rows))


def raw_model() -> LinearModel:
    """The uncorrected estimator: prediction = delta_hat."""
    return LinearModel(("delta_hat",), (0.0, 1.0))


def write_dataset(rows: Iterable[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([*FEATURE_NAMES, "delta_true"])
    for row in rows:
        w.writerow([_num(v) for v in row.features.values] + [row.delta_true])
    return buf.getvalue()


def _num(v: float):
    return int(v) if float(v).is_integer() else repr(v)


def read_dataset(text: str) -> list[Row]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != [*FEATURE_NAMES, "delta_true"]:
        raise ValueError("unexpected dataset header")
    rows = []
    for rec in reader:
        if not rec:
            continue
        *feats, delta = rec
        rows.append(Row(FeatureVector(tuple(float(v) for v in feats)), int(delta)))
    return rows
