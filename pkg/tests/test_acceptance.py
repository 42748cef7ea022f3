"""Acceptance suite: one recorded pass/fail line per criterion."""

import math
import random
import statistics
from collections import Counter

import pytest

from selfnest.approx import (
    approximate_tree,
    average_to_linear,
    build_worst_case_tree,
    min_self_nested_distance,
    worst_case_bound,
)
from selfnest.bench import bench_bottomup, bench_space
from selfnest.bottomup import BUILTINS, eval_dag, eval_tree, vertex_count
from selfnest.combinatorics import (
    asymptotic_equivalent,
    count_self_nested_eq,
    log_count_self_nested,
    self_nested_frequency,
)
from selfnest.editdist import brute_force_distance, edit_distance, edit_distance_dag
from selfnest.flow import FlowNetwork, assignment_oracle, check_flow, min_cost_max_flow
from selfnest.predictor import BASELINE_FEATURES, evaluate, fit_ols, generate_dataset, predict, raw_model
from selfnest.reduction import (
    expand,
    expand_linear,
    from_linear,
    is_linear,
    is_self_nested_naive,
    is_self_nested_profile,
    linear_size,
    multiplicities,
    random_linear_dag,
    reduce,
    to_linear,
)
from selfnest.trees import height, is_isomorphic, random_tree, subtrees

SEED = 20240601


def rand_trees(count, max_size, seed, min_size=1):
    rng = random.Random(seed)
    return [random_tree(rng.randint(min_size, max_size), rng.getrandbits(32)) for _ in range(count)]


def rand_linear(count, seed, max_h=5, max_d=3):
    rng = random.Random(seed)
    return [
        random_linear_dag(rng.randint(0, max_h), rng.randint(1, max_d), rng.getrandbits(32))
        for _ in range(count)
    ]


# 1. frequency table

PRINTED_ABS = {(2, 2): 0.88, (3, 2): 0.49, (4, 2): 0.07, (5, 2): 3.36e-4}
PRINTED_REL = {
    (2, 3): 6.18e-1,
    (2, 4): 3.52e-1,
    (3, 4): 7.43e-5,
    (4, 3): 2.90e-8,
    (5, 3): 3.56e-28,
    (4, 4): 4.16e-23,
    (5, 4): 1.66e-100,
}


def test_1_frequency_table(verdict):
    bad = []
    for (H, d), v in PRINTED_ABS.items():
        if abs(self_nested_frequency(H, d).value - v) > 0.01:
            bad.append((H, d))
    for (H, d), v in PRINTED_REL.items():
        if abs(self_nested_frequency(H, d).value / v - 1) > 0.01:
            bad.append((H, d))
    c33 = self_nested_frequency(3, 3)
    if (c33.numerator, c33.denominator) != (201, 8435):
        bad.append((3, 3))
    assert verdict("1 frequency table", not bad, f"cells off: {bad}; (3,3)={c33.value:.4e}")


# 2. worst case


@pytest.mark.parametrize("d", [2, 3, 4])
def test_2_worst_case_height_two(verdict, d):
    dist, best = min_self_nested_distance(build_worst_case_tree(2, d), max_h=3, max_label=d + 2)
    want = worst_case_bound(2, d)
    ok = dist == want
    detail = f"got {dist}, expected {want}" + ("" if ok else f", argmin rows {best.rows}")
    assert verdict(f"2 worst case H=2 d={d}", ok, detail)


def test_2_worst_case_advisory(verdict):
    dist, _ = min_self_nested_distance(build_worst_case_tree(3, 4), max_h=3, max_label=6)
    verdict("2 (advisory) worst case H=3 d=4", dist == 16, f"got {dist}, expected 16")


# 3. edit distance oracles


def test_3_oracle_equivalence(verdict):
    small = rand_trees(400, 10, SEED)
    mismatch = sum(edit_distance(a, b) != brute_force_distance(a, b) for a, b in zip(small[::2], small[1::2]))
    mid = rand_trees(200, 50, SEED + 1)
    mismatch_dag = sum(
        edit_distance(a, b) != edit_distance_dag(reduce(a), reduce(b)) for a, b in zip(mid[::2], mid[1::2])
    )
    ok = mismatch == 0 and mismatch_dag == 0
    assert verdict("3 edit distance oracles", ok, f"brute-force mismatches {mismatch}/200, dag mismatches {mismatch_dag}/100")


# 4. metric axioms


def test_4_metric_axioms(verdict):
    ts = rand_trees(300, 30, SEED + 2)
    failures = 0
    for a, b, c in zip(ts[::3], ts[1::3], ts[2::3]):
        ab, ba, bc, ac = edit_distance(a, b), edit_distance(b, a), edit_distance(b, c), edit_distance(a, c)
        failures += (ab == 0) != is_isomorphic(a, b)
        failures += ab != ba
        failures += ac > ab + bc
    assert verdict("4 metric axioms", failures == 0, f"{failures} violations over 100 triples")


# 5. reduction round trip and self-nested equivalence


def test_5_roundtrip_and_self_nested(verdict):
    ts = rand_trees(1000, 200, SEED + 3) + [expand_linear(l) for l in rand_linear(200, SEED + 4)]
    bad_round = bad_sn = 0
    for t in ts:
        d = reduce(t)
        bad_round += not is_isomorphic(expand(d), t)
        bad_sn += not (is_linear(d) == is_self_nested_profile(d) == is_self_nested_naive(t))
    ok = bad_round == 0 and bad_sn == 0
    assert verdict("5 reduction round trip", ok, f"round-trip failures {bad_round}, disagreements {bad_sn} of {len(ts)}")


# 6. bottom-up evaluation


def test_6_bottom_up(verdict):
    bad = 0
    for t in rand_trees(500, 200, SEED + 5):
        d = reduce(t)
        bad += any(eval_tree(s, t) != eval_dag(s, d) for s in BUILTINS.values())
    bad_lin = sum(
        linear_size(l) != eval_tree(vertex_count, expand_linear(l)) for l in rand_linear(200, SEED + 6)
    )
    ok = bad == 0 and bad_lin == 0
    assert verdict("6 bottom-up equivalence", ok, f"tree/dag mismatches {bad}/500, linear size mismatches {bad_lin}/200")


# 7. multiplicities


def test_7_multiplicities(verdict):
    bad = 0
    for t in rand_trees(300, 200, SEED + 7):
        d = reduce(t)
        occ = Counter(s.key for s in subtrees(t))
        mu = multiplicities(d)
        bad += any(occ[expand(d, v).key] != m for v, m in mu.items()) or len(mu) != len(occ)
    assert verdict("7 multiplicities", bad == 0, f"{bad}/300 trees disagree")


# 8. averaging


def test_8_averaging(verdict):
    not_idem = sum(
        not is_isomorphic(approximate_tree(t), t) for t in map(expand_linear, rand_linear(200, SEED + 8))
    )
    bad_out = 0
    worst_visits = 0.0
    for t in rand_trees(500, 200, SEED + 9):
        out = approximate_tree(t)
        bad_out += not (is_self_nested_naive(out) and height(out) == height(t))
        d = reduce(t)
        stats = Counter()
        average_to_linear(d, stats)
        if d.n_edges:
            worst_visits = max(worst_visits, stats["edges"] / d.n_edges)
    ok = not_idem == 0 and bad_out == 0 and worst_visits <= 3
    detail = f"not idempotent {not_idem}/200, bad outputs {bad_out}/500, max edge visits {worst_visits:.1f}*#E"
    assert verdict("8 averaging properties", ok, detail)


# 9. min-cost flow


def _guarded_network(rng):
    n = rng.randint(3, 7)
    net = FlowNetwork(n, 0, n - 1)
    budget = 10
    for _ in range(rng.randint(2, 12)):
        u, v = rng.randrange(n - 1), rng.randrange(1, n)
        if u == v:
            continue
        cap = rng.randint(0, 4)
        if u == 0:
            cap = min(cap, budget)
            budget -= cap
        net.add_arc(u, v, cap, rng.randint(0, 9))
    return net


def test_9_flow_kernel(verdict):
    rng = random.Random(SEED + 10)
    mismatch = infeasible = 0
    for _ in range(200):
        net = _guarded_network(rng)
        res = min_cost_max_flow(net)
        try:
            check_flow(net, res)
        except AssertionError:
            infeasible += 1
        mismatch += res.cost != assignment_oracle(net)
    ok = mismatch == 0 and infeasible == 0
    assert verdict("9 min-cost flow kernel", ok, f"oracle mismatches {mismatch}/200, failed checks {infeasible}")


# 10. asymptotics


def test_10_asymptotics(verdict):
    def gap(n):
        return abs(log_count_self_nested(n, n) / asymptotic_equivalent(n, n) - 1)

    worst = max(
        abs(log_count_self_nested(H, d) - math.log(count_self_nested_eq(H, d)))
        / max(1.0, math.log(count_self_nested_eq(H, d)))
        for H in range(1, 13)
        for d in range(1, 13)
    )
    ok = gap(64) < gap(16) and worst <= 1e-6
    assert verdict("10 asymptotics trend", ok, f"gap(16)={gap(16):.4f}, gap(64)={gap(64):.4f}, log error {worst:.1e}")


# 11. compression and speed


def test_11a_compression(verdict):
    recs = bench_space([2000, 8000, 32000], 5, SEED + 11)
    ratios = [r.value for r in recs if r.kind == "sn_ratio"]
    ok = all(r < 0.10 for r in ratios) and all(a > b for a, b in zip(ratios, ratios[1:]))
    assert verdict("11a linear-DAG compression", ok, "ratios " + ", ".join(f"{r:.4f}" for r in ratios))


def test_11b_speed(verdict):
    recs = {r.kind: r.value for r in bench_bottomup([10_000], 5, SEED + 12)}
    speedup = recs["sn_tree"] / recs["linear"]
    assert verdict("11b linear-DAG evaluation speed", speedup >= 5, f"speedup {speedup:.0f}x at size 1e4")


# 12. prediction


@pytest.fixture(scope="module")
def prediction_data():
    return generate_dataset(500, 20, 200, SEED + 13), generate_dataset(300, 20, 200, SEED + 14)


def test_12a_raw_bias(verdict, prediction_data):
    _, test = prediction_data
    s = evaluate(raw_model(), test)
    assert verdict("12a raw estimate bias", s.mean <= -0.25, f"mean relative error {s.mean:.3f}")


def test_12b_corrected_errors(verdict, prediction_data):
    train, test = prediction_data
    s = evaluate(fit_ols(train, seed=SEED), test)
    half = (s.q3 - s.q1) / 2
    ok = abs(s.median) <= 0.10 and half <= 0.35
    assert verdict("12b corrected model errors", ok, f"median {s.median:.3f}, IQR [{s.q1:.3f}, {s.q3:.3f}]")


def test_12c_beats_baseline(verdict, prediction_data):
    train, test = prediction_data
    full, base = fit_ols(train), fit_ols(train, BASELINE_FEATURES)
    scored = [r for r in test if r.delta_true]
    wins = sum(
        abs(predict(full, r.features) - r.delta_true) < abs(predict(base, r.features) - r.delta_true)
        for r in scored
    )
    share = wins / len(scored)
    assert verdict("12c full model beats baseline", share > 0.5, f"wins on {share:.1%} of {len(scored)} pairs")
