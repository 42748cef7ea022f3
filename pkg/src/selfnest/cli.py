"""Command-line interface.

Exit status: 0 ok, 1 usage error, 2 data error (unreadable or malformed
input), 3 refusal by a guard or generator cap.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import approx, bench, combinatorics, predictor
from .bottomup import BUILTINS, eval_dag, eval_tree
from .editdist import brute_force_distance, edit_distance, edit_distance_dag
from .errors import GenerationError, GuardError
from .reduction import (
    DagReduction,
    expand,
    expand_linear,
    is_self_nested_naive,
    random_linear_dag,
    reduce,
)
from .trees import canonical_key, is_isomorphic, parse, random_tree

EXIT_USAGE, EXIT_DATA, EXIT_GUARD = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_tree(path: str):
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"{path}: no tree found")
    return parse(lines[0])


def _write(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _sizes(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x]


def cmd_gen(a):
    if a.self_nested:
        if a.height is None or a.degree is None:
            raise argparse.ArgumentTypeError("--self-nested needs --height and --degree")
        t = expand_linear(random_linear_dag(a.height, a.degree, a.seed))
    else:
        if a.size is None:
            raise argparse.ArgumentTypeError("--size is required")
        t = random_tree(a.size, a.seed)
    print(canonical_key(t))


def cmd_reduce(a):
    sys.stdout.write(reduce(_read_tree(a.file)).to_text())


def cmd_expand(a):
    print(canonical_key(expand(DagReduction.from_text(Path(a.file).read_text()))))


def cmd_canon(a):
    print(canonical_key(_read_tree(a.file)))


def cmd_iso(a):
    print(str(is_isomorphic(_read_tree(a.a), _read_tree(a.b))).lower())


def cmd_selfnested(a):
    print(str(is_self_nested_naive(_read_tree(a.file))).lower())


def cmd_eval(a):
    t = _read_tree(a.file)
    spec = BUILTINS[a.function]
    print(eval_dag(spec, reduce(t)) if a.dag else eval_tree(spec, t))


def cmd_distance(a):
    t1, t2 = _read_tree(a.a), _read_tree(a.b)
    if a.method == "tree":
        d = edit_distance(t1, t2)
    elif a.method == "dag":
        d = edit_distance_dag(reduce(t1), reduce(t2))
    else:
        d = brute_force_distance(t1, t2)
    print(d)


def cmd_approximate(a):
    t = _read_tree(a.file)
    out, report = approx.approximation_report(t, rounding=a.rounding)
    print(canonical_key(out))
    if a.report == "csv":
        print(approx.ApproximationReport.CSV_HEADER)
        print(report.csv_row())


def cmd_count(a):
    f = combinatorics.count_self_nested_eq if a.eq else combinatorics.count_unordered_le
    print(f(a.height, a.degree))


def cmd_freq(a):
    print("H,d,numerator,denominator,value")
    for c in combinatorics.frequency_table(a.maxH, a.maxD):
        print(f"{c.H},{c.d},{c.numerator},{c.denominator},{c.value:.6e}")


def cmd_logcount(a):
    exact = combinatorics.count_self_nested_eq(a.height, a.degree)
    print(f"log_count {combinatorics.log_count_self_nested(a.height, a.degree)!r}")
    print(f"log_exact {math.log(exact)!r}")
    print(f"equivalent {combinatorics.asymptotic_equivalent(a.height, a.degree)!r}")


def cmd_worstcase(a):
    t = approx.build_worst_case_tree(a.height, a.degree)
    print(f"bound {approx.worst_case_bound(a.height, a.degree)}")
    print(f"tree {canonical_key(t)}")
    if a.verify:
        max_h = a.max_height if a.max_height is not None else a.height + 1
        max_label = a.max_label if a.max_label is not None else a.degree + 2
        dist, lin = approx.min_self_nested_distance(t, max_h, max_label)
        print(f"min_distance {dist}")
        print(f"argmin {canonical_key(expand_linear(lin))}")


def cmd_bench(a):
    records = bench.EXPERIMENTS[a.experiment](_sizes(a.sizes), a.reps, a.seed)
    _write(bench.records_to_csv(records), a.out)


def cmd_dataset(a):
    rows = predictor.generate_dataset(a.pairs, a.size_lo, a.size_hi, a.seed)
    _write(predictor.write_dataset(rows), a.out)


def cmd_train(a):
    rows = predictor.read_dataset(Path(a.data).read_text())
    names = predictor.BASELINE_FEATURES if a.baseline else predictor.FEATURE_NAMES
    model = predictor.fit_ols(rows, names, seed=a.seed)
    _write(model.to_text(), a.out)


def cmd_predict(a):
    model = predictor.LinearModel.from_text(Path(a.model).read_text())
    feats = predictor.make_features(_read_tree(a.a), _read_tree(a.b))
    print(f"delta_hat {feats['delta_hat']:g}")
    print(f"prediction {predictor.predict(model, feats)!r}")


def cmd_evaluate(a):
    model = predictor.LinearModel.from_text(Path(a.model).read_text())
    rows = predictor.read_dataset(Path(a.data).read_text())
    s = predictor.evaluate(model, rows)
    print("mean,median,q1,q3,n,excluded")
    print(f"{s.mean!r},{s.median!r},{s.q1!r},{s.q3!r},{s.n},{s.excluded}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="selfnest", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="random tree (or random self-nested tree)")
    s.add_argument("--size", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--self-nested", action="store_true")
    s.add_argument("--height", type=int)
    s.add_argument("--degree", type=int)
    s.set_defaults(func=cmd_gen)

    for name, func, help_ in (
        ("reduce", cmd_reduce, "tree file -> DAG text"),
        ("expand", cmd_expand, "DAG file -> tree text"),
        ("canon", cmd_canon, "canonical key of a tree"),
        ("selfnested", cmd_selfnested, "is the tree self-nested"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("file")
        s.set_defaults(func=func)

    s = sub.add_parser("iso", help="are two trees isomorphic")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser("eval", help="evaluate a builtin bottom-up function")
    s.add_argument("function", choices=sorted(BUILTINS))
    s.add_argument("file")
    s.add_argument("--dag", action="store_true", help="evaluate on the DAG reduction")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("distance", help="constrained edit distance")
    s.add_argument("--method", choices=("tree", "dag", "oracle"), default="tree")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_distance)

    s = sub.add_parser("approximate", help="averaging self-nested approximation")
    s.add_argument("file")
    s.add_argument("--report", choices=("csv",))
    s.add_argument("--rounding", choices=approx.ROUNDING, default="floor")
    s.set_defaults(func=cmd_approximate)

    s = sub.add_parser("count", help="exact tree counts")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--eq", action="store_true", help="self-nested, height exactly H")
    g.add_argument("--le", action="store_true", help="unordered, height at most H")
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("freq", help="relative frequency table of self-nested trees")
    s.add_argument("--maxH", type=int, default=5)
    s.add_argument("--maxD", type=int, default=4)
    s.set_defaults(func=cmd_freq)

    s = sub.add_parser("logcount", help="log-count and its asymptotic equivalent")
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.set_defaults(func=cmd_logcount)

    s = sub.add_parser("worstcase", help="worst-case tree and bound")
    s.add_argument("--height", type=int, required=True)
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--max-label", type=int)
    s.add_argument("--max-height", type=int)
    s.set_defaults(func=cmd_worstcase)

    s = sub.add_parser("bench", help="benchmarks as CSV")
    s.add_argument("experiment", choices=sorted(bench.EXPERIMENTS))
    s.add_argument("--sizes", default="100,1000")
    s.add_argument("--reps", type=int, default=5)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("dataset", help="training/test pairs as CSV")
    s.add_argument("--pairs", type=int, default=500)
    s.add_argument("--size-lo", type=int, default=20)
    s.add_argument("--size-hi", type=int, default=200)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_dataset)

    s = sub.add_parser("train", help="fit the linear model")
    s.add_argument("--data", required=True)
    s.add_argument("--out")
    s.add_argument("--seed", type=int)
    s.add_argument("--baseline", action="store_true", help="only features of t1 and t2")
    s.set_defaults(func=cmd_train)

    s = sub.add_parser("predict", help="predict the distance between two trees")
    s.add_argument("--model", required=True)
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("eval-model", aliases=["evaluate"], help="relative error summary")
    s.add_argument("--model", required=True)
    s.add_argument("--data", required=True)
    s.set_defaults(func=cmd_evaluate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except argparse.ArgumentTypeError as exc:
        print(f"selfnest: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GuardError, GenerationError) as exc:
        print(f"selfnest: refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (OSError, ValueError, KeyError) as exc:
        print(f"selfnest: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
