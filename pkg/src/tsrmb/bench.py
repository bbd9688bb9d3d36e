"""Out-of-sample comparison of greedy and the two-scenario solver.

Per window: both solvers see the historical scenarios (S1, S2); both are
then scored on the realized riders S*, against OPT(S*) from the exact
single-scenario solver.
"""

from __future__ import annotations

import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import TSRMBError
from .evaluate import eval_explicit, eval_tsrm
from .instances.trips import DEFAULT_BBOX, WindowSpec, build_window, read_trip_records
from .io import read_instance
from .model import TOL, MetricInstance, ScenarioSet
from .solvers.explicit import solve_greedy, solve_single_scenario, solve_two_scenarios


@dataclass(frozen=True)
class BenchRow:
    window: str
    n_drivers: int
    n_r1: int
    n_s_star: int
    greedy_over_opt: float
    alg_over_opt: float
    insample_ratio: float
    bottleneck_ratio: float
    total_weight_ratio: float


RATIO_FIELDS = ("greedy_over_opt", "alg_over_opt", "insample_ratio", "bottleneck_ratio",
                "total_weight_ratio")


def ratio(a: float, b: float) -> float:
    if b <= TOL:
        return 1.0 if a <= TOL else float("inf")
    return a / b


def compare(inst: MetricInstance, realized) -> dict:
    """Ratios for one sample. ``inst`` carries the in-sample scenarios."""
    scen = list(inst.scenarios())
    if len(scen) == 1:
        scen = scen * 2
    insample = inst.with_scenarios(ScenarioSet.of(scen[:2]))
    star = inst.with_scenarios(ScenarioSet.of([realized]))
    gr = solve_greedy(insample)
    alg = solve_two_scenarios(insample)
    opt = eval_explicit(star, solve_single_scenario(star, realized)).total
    gr_star = eval_explicit(star, gr)
    alg_star = eval_explicit(star, alg)
    return {
        "greedy_over_opt": ratio(gr_star.total, opt),
        "alg_over_opt": ratio(alg_star.total, opt),
        "insample_ratio": ratio(eval_explicit(insample, gr).total, eval_explicit(insample, alg).total),
        "bottleneck_ratio": ratio(gr_star.worst_cost2, alg_star.worst_cost2),
        "total_weight_ratio": ratio(eval_tsrm(star, gr).total, eval_tsrm(star, alg).total),
    }


def _mean_row(label, inst, realized_size, samples) -> BenchRow:
    means = {k: float(np.mean([s[k] for s in samples])) for k in RATIO_FIELDS}
    return BenchRow(label, inst.n_d, inst.n_r1, realized_size, **means)


def sample_seed(base_seed: int, window_index: int, repeat: int) -> int:
    ss = np.random.SeedSequence([int(base_seed) & 0xFFFFFFFFFFFFFFFF, window_index, repeat])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _threads(n_jobs: int) -> int:
    cap = os.environ.get("TSRM_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    return max(1, min(limit, n_jobs))


def bench_trips(path, windows: Sequence[WindowSpec], repeats: int = 10, seed: int = 0,
                bbox=DEFAULT_BBOX, errors: list | None = None) -> list[BenchRow]:
    """One row per window (input order); windows that fail are reported in
    ``errors`` as (label, message) and skipped."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    ranges = [r for w in windows for r in w.ranges()]
    records = read_trip_records(path, ranges)

    def run(item):
        idx, w = item
        try:
            samples, last = [], None
            for rep in range(repeats):
                tw = build_window(records, w, bbox, sample_seed(seed, idx, rep))
                samples.append(compare(tw.instance, tw.realized))
                last = tw
            return _mean_row(last.label, last.instance, len(last.realized), samples)
        except TSRMBError as exc:
            return (w.label(), f"{type(exc).__name__}: {exc}")

    with ThreadPoolExecutor(max_workers=_threads(len(windows))) as pool:
        results = list(pool.map(run, enumerate(windows)))
    rows = []
    for res in results:
        if isinstance(res, BenchRow):
            rows.append(res)
        elif errors is not None:
            errors.append(res)
    return rows


def bench_instances(paths: Sequence, errors: list | None = None) -> list[BenchRow]:
    """Benchmark saved instances: the first two explicit scenarios are the
    in-sample pair (a single scenario is used twice) and the third, if
    present, is the realized one; otherwise the first scenario is."""
    def run(path):
        try:
            inst = read_instance(path)
            scen = list(inst.scenarios())
            realized = scen[2] if len(scen) >= 3 else scen[0]
            base = inst.with_scenarios(ScenarioSet.of(scen[:2]))
            return _mean_row(Path(path).stem, inst, len(realized), [compare(base, realized)])
        except TSRMBError as exc:
            return (Path(path).stem, f"{type(exc).__name__}: {exc}")

    with ThreadPoolExecutor(max_workers=_threads(len(paths))) as pool:
        results = list(pool.map(run, paths))
    rows = []
    for res in results:
        if isinstance(res, BenchRow):
            rows.append(res)
        elif errors is not None:
            errors.append(res)
    return rows


def rows_to_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    buf.write(",".join(f.name for f in fields(BenchRow)) + "\n")
    for row in rows:
        vals = []
        for v in astuple(row):
            if isinstance(v, float):
                vals.append(f"{v:.6f}")
            else:
                vals.append(str(v))
        buf.write(",".join(vals) + "\n")
    return buf.getvalue()


def rows_to_objs(rows: Sequence[BenchRow]) -> list[dict]:
    return [dict(zip((f.name for f in fields(BenchRow)), astuple(r))) for r in rows]
