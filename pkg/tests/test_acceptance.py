"""One test per acceptance criterion; each prints a PASS/FAIL line.

Random corpora are drawn from fixed seeds. Runtime limits are checked on
the package calls only (oracle time is excluded).
"""

import math
import time
import warnings

import numpy as np

from tsrmb.cli import main
from tsrmb.errors import NoPerfectMatching
from tsrmb.evaluate import (brute_force_opt, eval_explicit, eval_implicit_bruteforce,
                            eval_stochastic, eval_tsrm, evaluate)
from tsrmb.instances import (gen_from_2partition, gen_from_3dm, gen_from_set_cover,
                             gen_line_counterexample, gen_random_euclidean,
                             gen_surplus_counterexample, planted_3dm)
from tsrmb.matching import (bottleneck_value, min_weight_max_cardinality_matching,
                            min_weight_perfect_matching)
from tsrmb.solvers import (p_supplier_3approx, solve_greedy, solve_k1, solve_no_surplus,
                           solve_p_scenarios, solve_single_scenario, solve_small_surplus,
                           solve_two_scenarios)
from tsrmb.solvers.implicit import supplier_radius
from tsrmb.variants import (ScenarioDistribution, solve_tsrm_balanced, solve_tsrm_greedy,
                            solve_tsrm_no_surplus, solve_tssmb_no_surplus)

from oracles import (bottleneck_dp, max_card_min_weight_dp, min_perfect_dp, robust_totals_bf,
                     supplier_radius_bf)
from tripgen import T0, fmt, planted_rows, write_log

TOL = 1e-9


class Clock:
    def __init__(self):
        self.seconds = 0.0

    def __call__(self, fn, *args, **kwargs):
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        finally:
            self.seconds += time.perf_counter() - start


def opt_split(inst):
    """(OPT1, OPT2) of an optimal D1 by pure enumeration."""
    return min(robust_totals_bf(inst).values(), key=lambda t: t[0] + t[1])


def test_01_matching_primitives(acceptance_line):
    rng = np.random.default_rng(1)
    clock = Clock()
    bad = 0
    for _ in range(500):
        r, c = (int(x) for x in rng.integers(1, 8, size=2))
        w = np.round(rng.uniform(0, 10, size=(r, c)), int(rng.integers(0, 3)))
        w[rng.random((r, c)) < 0.3] = np.inf
        want_perfect = min_perfect_dp(w)
        try:
            got = clock(min_weight_perfect_matching, w).total_weight
        except NoPerfectMatching:
            got = math.inf
        try:
            got_b = clock(bottleneck_value, w)
        except NoPerfectMatching:
            got_b = math.inf
        mc = clock(min_weight_max_cardinality_matching, w)
        want_c, want_w = max_card_min_weight_dp(w)
        ok = (got == want_perfect or abs(got - want_perfect) <= TOL) \
            and (got_b == bottleneck_dp(w)) \
            and len(mc) == want_c and abs(mc.total_weight - want_w) <= TOL
        bad += not ok
    ok = bad == 0 and clock.seconds < 30
    acceptance_line(1, "matching primitives equal brute force", ok,
                    f"500 matrices, {bad} mismatches, {clock.seconds:.2f}s")
    assert ok


def test_02_single_scenario_exact(acceptance_line):
    rng = np.random.default_rng(2)
    clock = Clock()
    worst = 0.0
    for i in range(200):
        m, s = (int(x) for x in rng.integers(1, 5, size=2))
        nd = int(rng.integers(m + s, 10))
        n_r2 = int(rng.integers(s, 7))
        inst = gen_random_euclidean(m, n_r2, nd, f"explicit:1x{s}", 1.0, 200 + i)
        d1 = clock(solve_single_scenario, inst)
        total = clock(eval_explicit, inst, d1).total
        worst = max(worst, abs(total - brute_force_opt(inst).total))
    ok = worst <= TOL and clock.seconds < 60
    acceptance_line(2, "single-scenario solver is exact", ok,
                    f"200 instances, max gap {worst:.2e}, {clock.seconds:.2f}s")
    assert ok


def test_03_greedy_counterexample(acceptance_line):
    inst = gen_line_counterexample(3, 0.1)
    greedy = evaluate(inst, solve_greedy(inst)).total
    opt = brute_force_opt(inst).total
    ratios = []
    for m in range(1, 7):
        g = gen_line_counterexample(m, 0.1)
        ratios.append(evaluate(g, solve_greedy(g)).total / brute_force_opt(g).total)
    steps = np.diff(ratios)
    ok = abs(greedy - 7.6) <= TOL and abs(opt - 2.0) <= TOL \
        and all(abs(r - 1.9 * (m + 1) / 2) <= TOL for m, r in zip(range(1, 7), ratios)) \
        and np.all(np.abs(steps - 0.95) <= TOL)
    acceptance_line(3, "greedy line counterexample", ok,
                    f"greedy {greedy:.6f}, oracle {opt:.6f}, ratios "
                    + " ".join(f"{r:.3f}" for r in ratios))
    assert ok


def _bound_corpus(count, make, solve, bound, limit, seed):
    """Run ``solve`` on ``count`` instances; returns (ok, detail)."""
    rng = np.random.default_rng(seed)
    clock = Clock()
    worst, failures = 0.0, 0
    for i in range(count):
        inst = make(rng, i)
        d1 = clock(solve, inst)
        total = clock(evaluate, inst, d1).total
        o1, o2 = opt_split(inst)
        b = bound(o1, o2)
        failures += total > b + TOL or total < o1 + o2 - TOL
        worst = max(worst, total / (o1 + o2) if o1 + o2 > 0 else 1.0)
    ok = failures == 0 and clock.seconds < limit
    return ok, (f"{count} instances, {failures} violations, worst total/OPT {worst:.3f}, "
                f"{clock.seconds:.2f}s")


def test_04_two_scenarios(acceptance_line):
    def make(rng, i):
        m, s = (int(x) for x in rng.integers(1, 5, size=2))
        nd = int(rng.integers(m + s, 10))
        return gen_random_euclidean(m, int(rng.integers(s, 9)), nd, f"explicit:2x{s}", 1.0,
                                    400 + i)
    ok, detail = _bound_corpus(200, make, solve_two_scenarios, lambda a, b: a + 5 * b, 300, 4)
    acceptance_line(4, "two scenarios within OPT1 + 5 OPT2", ok, detail)
    assert ok


def test_05_p_scenarios(acceptance_line):
    def make(rng, i):
        m, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        nd = int(rng.integers(m + s, 9))
        return gen_random_euclidean(m, int(rng.integers(s, 9)), nd, f"explicit:4x{s}", 1.0,
                                    500 + i)
    ok, detail = _bound_corpus(100, make, solve_p_scenarios, lambda a, b: a + 17 * b,
                               math.inf, 5)
    acceptance_line(5, "p=4 scenarios within OPT1 + 17 OPT2", ok, detail)
    assert ok


def test_06_no_surplus(acceptance_line):
    rng = np.random.default_rng(6)
    clock = Clock()
    failures, worst = 0, 0.0
    for i in range(150):
        k = int(rng.integers(1, 4))
        n = int(rng.integers(k, 9))
        m = int(rng.integers(1, 4))
        inst = gen_random_euclidean(m, n, m + k, f"implicit:{k}", 1.0, 600 + i)
        d1 = clock(solve_no_surplus, inst)
        total = eval_implicit_bruteforce(inst, d1).total
        o1, o2 = opt_split(inst)
        failures += total > o1 + 3 * o2 + TOL
        worst = max(worst, total / (o1 + o2))
    ok = failures == 0
    acceptance_line(6, "no surplus within OPT1 + 3 OPT2", ok,
                    f"150 instances, {failures} violations, worst total/OPT {worst:.3f}")
    assert ok


def test_07_small_surplus(acceptance_line):
    rng = np.random.default_rng(7)
    clock = Clock()
    failures, worst = 0, 0.0
    for i in range(100):
        ell = int(rng.integers(1, 3))
        n = int(rng.integers(18, 23))
        m = int(rng.integers(1, 3))
        inst = gen_random_euclidean(m, n, m + 3 + ell, "implicit:3", 1.0, 700 + i)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            d1 = clock(solve_small_surplus, inst)
        total = clock(evaluate, inst, d1).total
        opt = brute_force_opt(inst)
        failures += total > 3 * opt.opt1 + 17 * opt.opt2 + TOL or total < opt.total - TOL
        worst = max(worst, total / opt.total)
    ok = failures == 0 and clock.seconds < 600
    acceptance_line(7, "small surplus within 3 OPT1 + 17 OPT2", ok,
                    f"100 instances, {failures} violations, worst total/OPT {worst:.3f}, "
                    f"{clock.seconds:.2f}s")
    assert ok


def test_08_k1(acceptance_line):
    def make(rng, i):
        m = int(rng.integers(1, 4))
        ell = int(rng.integers(0, m + 2))  # surplus <= |D|/2 since |D| = m + 1 + ell
        return gen_random_euclidean(m, int(rng.integers(1, 9)), m + 1 + ell, "implicit:1", 1.0,
                                    800 + i)
    corpus_ok, detail = _bound_corpus(150, make, solve_k1, lambda a, b: a + 15 * b,
                                      math.inf, 8)
    k1, single = [], []
    for m in range(2, 7):
        inst = gen_surplus_counterexample(m)
        k1.append(evaluate(inst, solve_k1(inst)).total)
        single.append(evaluate(inst, solve_single_scenario(inst, [0])).total)
    ms = np.arange(2, 7)
    slope = float(np.polyfit(ms, single, 1)[0])
    bounded = max(k1) - min(k1) <= TOL and max(k1) <= 1.1 + TOL
    linear = slope >= 0.7 and all(b >= a - TOL for a, b in zip(single, single[1:])) \
        and all(v >= 0.75 * m - TOL for v, m in zip(single, ms))
    ok = corpus_ok and bounded and linear
    acceptance_line(8, "k=1 within OPT1 + 15 OPT2, bounded on the surplus counterexample", ok,
                    detail + "; k1 " + " ".join(f"{v:.3f}" for v in k1) + "; single-scenario "
                    + " ".join(f"{v:.3f}" for v in single) + f"; slope {slope:.3f}")
    assert ok


def test_09_p_supplier(acceptance_line):
    rng = np.random.default_rng(9)
    failures, worst, done = 0, 0.0, 0
    while done < 100:
        n_f = int(rng.integers(1, 13))
        p = int(rng.integers(1, n_f + 1))
        if math.comb(n_f, p) > 10 ** 5:
            continue
        inst = gen_random_euclidean(1, int(rng.integers(1, 11)), n_f, "implicit:1", 1.0,
                                    900 + done)
        chosen = p_supplier_3approx(inst, range(inst.n_r2), range(inst.n_d), p)
        cf = inst.r2_to_d()
        got, best = supplier_radius(cf, chosen), supplier_radius_bf(cf, p)
        failures += len(set(chosen)) != p or got > 3 * best + TOL
        worst = max(worst, got / best if best > 0 else 1.0)
        done += 1
    ok = failures == 0
    acceptance_line(9, "p-supplier radius within 3x optimal", ok,
                    f"100 instances, {failures} violations, worst ratio {worst:.3f}")
    assert ok


def _no_surplus_explicit(rng, i, base):
    m, s = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    return gen_random_euclidean(m, int(rng.integers(s, 8)), m + s, f"explicit:3x{s}", 1.0,
                                base + i)


def test_10_variants(acceptance_line):
    rng = np.random.default_rng(10)
    fails = {"tssmb": 0, "greedy": 0, "alg8": 0, "balanced": 0}
    for i in range(100):
        inst = _no_surplus_explicit(rng, i, 1000)
        w = rng.random(3) + 0.05
        probs = tuple(w / w.sum())
        d1 = solve_tssmb_no_surplus(inst, ScenarioDistribution(probs))
        opt = brute_force_opt(inst, objective="stochastic", probs=probs)
        fails["tssmb"] += eval_stochastic(inst, d1, probs) > opt.opt1 + 3 * opt.opt2 + TOL
    for i in range(100):
        inst = _no_surplus_explicit(rng, i, 1100)
        opt = brute_force_opt(inst, objective="tsrm")
        g = eval_tsrm(inst, solve_tsrm_greedy(inst)).total
        a8 = eval_tsrm(inst, solve_tsrm_no_surplus(inst)).total
        bal = eval_tsrm(inst, solve_tsrm_balanced(inst)).total
        fails["greedy"] += g > 3 * opt.opt1 + opt.opt2 + TOL
        fails["alg8"] += a8 > opt.opt1 + 5 * opt.opt2 + TOL
        fails["balanced"] += bal > 7 / 3 * opt.total + TOL
    ok = not any(fails.values())
    acceptance_line(10, "variant guarantees", ok,
                    "violations " + ", ".join(f"{k}={v}" for k, v in fails.items()))
    assert ok


def test_11_reductions(acceptance_line):
    got = {}
    U, V, W, T = planted_3dm(3, True, 0)
    got["3dm yes"] = brute_force_opt(gen_from_3dm(U, V, W, T, 2)).total
    U, V, W, T = planted_3dm(3, False, 0)
    got["3dm no"] = brute_force_opt(gen_from_3dm(U, V, W, T, 3)).total
    got["cover yes"] = brute_force_opt(gen_from_set_cover(
        4, [[0, 1], [2, 3], [0, 2], [1, 3]], 2)).total
    got["cover no"] = brute_force_opt(gen_from_set_cover(
        4, [[0, 1], [1, 2], [2, 3], [0, 3]], 1)).total
    got["2partition"] = brute_force_opt(gen_from_2partition([1, 1, 1, 1], 4),
                                        objective="tsrm").total
    want = {"3dm yes": 2.0, "3dm no": 4.0, "cover yes": 2.0, "cover no": 4.0, "2partition": 26.0}
    ok = all(abs(got[k] - want[k]) <= TOL for k in want)
    acceptance_line(11, "reduction fidelity", ok,
                    ", ".join(f"{k}={got[k]:g}" for k in want))
    assert ok


def test_12_bench_determinism(acceptance_line, tmp_path, capsys):
    log = write_log(tmp_path / "log.csv", planted_rows(T0, n_r1=3, n_s=4, n_taxis=12, seed=3))
    outs = []
    for run in range(2):
        out = tmp_path / f"bench{run}.csv"
        code = main(["bench", "--trips", str(log), "--window", fmt(T0), "--repeats", "3",
                     "--seed", "2024", "--out", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    capsys.readouterr()
    lines = outs[0].decode().splitlines()
    header = lines[0].split(",")
    row = dict(zip(header, lines[1].split(",")))
    ok = outs[0] == outs[1] and len(lines) == 2 and row["alg_over_opt"] == "1.000000"
    acceptance_line(12, "bench CSV deterministic, alg_over_opt = 1 when S1 = S2 = S*", ok,
                    f"identical={outs[0] == outs[1]}, alg_over_opt={row['alg_over_opt']}")
    assert ok
