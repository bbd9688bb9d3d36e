"""Objective evaluation and the exhaustive oracle.

Implicit worst cases are computed exactly through Hall's condition: for
a rider set X and available drivers A, let h(X) be the |X|-th smallest
over drivers of min_{x in X} d(x, driver). Riders S can be matched into A
with bottleneck t iff h(X) <= t for every nonempty X within S, so the
bottleneck of S is the max of h over its subsets, and the worst scenario
of size k has value max{h(X) : |X| <= k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from . import kernels
from .errors import (BadDistribution, EnumerationTooLarge, InsufficientDrivers,
                     NoPerfectMatching, ScenarioKindError)
from .matching import min_weight_perfect_matching
from .model import (TOL, FirstStageDecision, MetricInstance, SolveReport, as_decision, cost1,
                    cost2, decision_from_drivers)

DEFAULT_ENUM_LIMIT = 2_000_000


@dataclass(frozen=True)
class OptDecomposition:
    opt1: float
    opt2: float
    optimal_d1: FirstStageDecision

    @property
    def total(self) -> float:
        return self.opt1 + self.opt2


def _report(c1, per, solver_name, opt2_guess, decision) -> SolveReport:
    keys = list(per)
    vals = [per[s] for s in keys]
    if vals:
        idx = int(np.argmax(vals))
        worst, worst_s = float(vals[idx]), keys[idx]
    else:
        worst, worst_s = 0.0, None
    if opt2_guess is None and decision is not None:
        opt2_guess = decision.meta.get("opt2_guess")
    return SolveReport(cost1=float(c1), per_scenario_cost2=per, worst_cost2=worst,
                       total=float(c1) + worst, solver_name=solver_name,
                       opt2_guess=opt2_guess, worst_scenario=worst_s, decision=decision)


def eval_explicit(inst: MetricInstance, d1, solver_name: str = "",
                  opt2_guess: float | None = None) -> SolveReport:
    """Worst case over the explicit scenarios: f(D1) = cost1 + max_S cost2(S)."""
    d1 = as_decision(inst, d1)
    avail = d1.available(inst.n_d)
    per = {}
    for s in inst.scenarios():
        per[s] = cost2(inst, avail, s)
    return _report(cost1(inst, d1), per, solver_name, opt2_guess, d1)


def _colex_rank(combos: np.ndarray, binom: np.ndarray) -> np.ndarray:
    rank = np.zeros(combos.shape[0], dtype=np.int64)
    for i in range(combos.shape[1]):
        rank += binom[combos[:, i], i + 1]
    return rank


def _binom_table(n: int, k: int) -> np.ndarray:
    t = np.zeros((n + 1, k + 2), dtype=np.int64)
    for a in range(n + 1):
        for b in range(min(a, k + 1) + 1):
            t[a, b] = math.comb(a, b)
    return t


def _combos(n: int, j: int) -> np.ndarray:
    if j == 0:
        return np.zeros((1, 0), dtype=np.int64)
    arr = np.fromiter((x for c in combinations(range(n), j) for x in c), dtype=np.int64,
                      count=math.comb(n, j) * j)
    return arr.reshape(-1, j)


def implicit_scenario_values(inst: MetricInstance, available: Sequence[int], k: int):
    """Bottleneck value of every size-k subset of R2 (lexicographic order).

    Returns ``(combos, values)``.
    """
    n = inst.n_r2
    available = list(available)
    if len(available) < k:
        raise InsufficientDrivers(f"scenarios of size {k} but only {len(available)} drivers left")
    dist = np.ascontiguousarray(inst.r2_to_d(None, available))
    binom = _binom_table(n, k)
    prev = None
    combos = _combos(n, 0)
    for j in range(1, k + 1):
        combos = _combos(n, j)
        vals = kernels.hall_values(dist, combos)
        if prev is not None:
            for drop in range(j):
                sub = np.delete(combos, drop, axis=1)
                np.maximum(vals, prev[_colex_rank(sub, binom)], out=vals)
        by_rank = np.empty(combos.shape[0])
        by_rank[_colex_rank(combos, binom)] = vals
        prev = by_rank
        last = vals
    return combos, last


def implicit_worst_value(inst: MetricInstance, available: Sequence[int], k: int,
                         _combo_cache: dict | None = None) -> float:
    """max over scenarios of size <= k of the second-stage bottleneck."""
    available = list(available)
    if len(available) < k:
        raise InsufficientDrivers(f"scenarios of size {k} but only {len(available)} drivers left")
    dist = np.ascontiguousarray(inst.r2_to_d(None, available))
    worst = 0.0
    for j in range(1, k + 1):
        if _combo_cache is not None:
            if j not in _combo_cache:
                _combo_cache[j] = _combos(inst.n_r2, j)
            combos = _combo_cache[j]
        else:
            combos = _combos(inst.n_r2, j)
        worst = max(worst, float(kernels.hall_values(dist, combos).max()))
    return worst


def _check_enum(count: int, enum_limit: int, what: str):
    if count > enum_limit:
        raise EnumerationTooLarge(f"{what} needs {count} evaluations, limit is {enum_limit}")


def eval_implicit_bruteforce(inst: MetricInstance, d1, enum_limit: int = DEFAULT_ENUM_LIMIT,
                             solver_name: str = "", opt2_guess: float | None = None) -> SolveReport:
    """Exact worst case over all size-k subsets of R2."""
    sc = inst.scenario_set
    if sc.is_explicit:
        raise ScenarioKindError("eval_implicit_bruteforce needs implicit scenarios")
    k = sc.k
    _check_enum(math.comb(inst.n_r2, k), enum_limit, f"C({inst.n_r2},{k})")
    d1 = as_decision(inst, d1)
    combos, vals = implicit_scenario_values(inst, d1.available(inst.n_d), k)
    per = {tuple(int(x) for x in c): float(v) for c, v in zip(combos, vals)}
    return _report(cost1(inst, d1), per, solver_name, opt2_guess, d1)


def evaluate(inst: MetricInstance, d1, enum_limit: int = DEFAULT_ENUM_LIMIT,
             solver_name: str = "") -> SolveReport:
    """Exact robust evaluation for either kind of scenario set."""
    if inst.scenario_set.is_explicit:
        return eval_explicit(inst, d1, solver_name)
    return eval_implicit_bruteforce(inst, d1, enum_limit, solver_name)


def eval_proxy(inst: MetricInstance, d1, s1: Sequence[int], s2: Sequence[int]) -> float:
    """beta = cost1 + max(cost2(s1), cost2(s2)); an empty set costs 0."""
    d1 = as_decision(inst, d1)
    avail = d1.available(inst.n_d)
    return cost1(inst, d1) + max(cost2(inst, avail, s1), cost2(inst, avail, s2))


def check_probs(inst: MetricInstance, probs) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64).reshape(-1)
    if probs.size != len(inst.scenarios()):
        raise BadDistribution(f"{probs.size} probabilities for {len(inst.scenarios())} scenarios")
    if (probs < 0).any() or not np.isfinite(probs).all():
        raise BadDistribution("probabilities must be finite and nonnegative")
    if abs(probs.sum() - 1.0) > TOL:
        raise BadDistribution(f"probabilities sum to {probs.sum()!r}, not 1")
    return probs


def eval_stochastic(inst: MetricInstance, d1, probs) -> float:
    """cost1 + sum_i p_i cost2(S_i)."""
    probs = check_probs(inst, probs)
    d1 = as_decision(inst, d1)
    avail = d1.available(inst.n_d)
    exp2 = sum(p * cost2(inst, avail, s) for p, s in zip(probs, inst.scenarios()) if p > 0)
    return cost1(inst, d1) + float(exp2)


def _min_total(inst: MetricInstance, riders, drivers) -> float:
    riders = list(riders)
    drivers = list(drivers)
    if len(drivers) < len(riders):
        raise InsufficientDrivers(f"{len(riders)} riders but only {len(drivers)} drivers")
    return min_weight_perfect_matching(inst.r2_to_d(riders, drivers)).total_weight


def eval_tsrm(inst: MetricInstance, d1, solver_name: str = "") -> SolveReport:
    """Total-weight objective: both stages pay the sum of matched edge weights."""
    d1 = as_decision(inst, d1)
    c1 = min_weight_perfect_matching(inst.r1_to_d(list(d1.drivers))).total_weight
    avail = d1.available(inst.n_d)
    per = {s: _min_total(inst, s, avail) for s in inst.scenarios()}
    return _report(c1, per, solver_name, None, d1)


def brute_force_opt(inst: MetricInstance, enum_limit: int = DEFAULT_ENUM_LIMIT,
                    objective: str = "robust", probs=None) -> OptDecomposition:
    """Exhaustive optimum over every driver subset D1 of size |R1|.

    ``objective`` is ``robust`` (the TSRMB worst case, explicit or implicit),
    ``stochastic`` (expected second stage, needs ``probs``) or ``tsrm``
    (total weights). Ties keep the lexicographically first D1.
    """
    m, n_d = inst.n_r1, inst.n_d
    if n_d < m:
        raise InsufficientDrivers(f"{m} first-stage riders but {n_d} drivers")
    sc = inst.scenario_set
    n_subsets = math.comb(n_d, m)
    if sc.is_explicit:
        scen = inst.scenarios()
        _check_enum(n_subsets * max(1, len(scen)), enum_limit, "oracle")
    else:
        if objective != "robust":
            raise ScenarioKindError(f"objective {objective!r} needs explicit scenarios")
        _check_enum(n_subsets * math.comb(inst.n_r2, sc.k), enum_limit, "oracle")
    if objective == "stochastic":
        probs = check_probs(inst, probs)
    elif objective not in ("robust", "tsrm"):
        raise ValueError(f"unknown objective {objective!r}")

    w1 = inst.r1_to_d()
    cache: dict = {}
    best = (math.inf, math.inf, None)
    for combo in combinations(range(n_d), m):
        try:
            c1 = min_weight_perfect_matching(w1[:, combo]).total_weight
        except NoPerfectMatching:
            continue
        if objective != "tsrm":
            c1 /= m
        if c1 >= best[0] + best[1] - TOL:
            continue
        chosen = set(combo)
        avail = [j for j in range(n_d) if j not in chosen]
        limit = best[0] + best[1] - TOL - c1
        try:
            if not sc.is_explicit:
                if len(avail) < sc.k:
                    continue
                c2 = implicit_worst_value(inst, avail, sc.k, cache)
            elif objective == "robust":
                c2 = 0.0
                for s in scen:
                    if len(avail) < len(s):
                        raise NoPerfectMatching
                    c2 = max(c2, cost2(inst, avail, s))
                    if c2 >= limit:
                        break
            elif objective == "tsrm":
                c2 = 0.0
                for s in scen:
                    c2 = max(c2, _min_total(inst, s, avail))
                    if c2 >= limit:
                        break
            else:
                c2 = 0.0
                for p, s in zip(probs, scen):
                    if p > 0:
                        if len(avail) < len(s):
                            raise NoPerfectMatching
                        c2 += p * cost2(inst, avail, s)
        except (NoPerfectMatching, InsufficientDrivers):
            continue
        if c1 + c2 < best[0] + best[1] - TOL:
            best = (c1, c2, combo)
    if best[2] is None:
        raise InsufficientDrivers("no feasible first-stage decision exists")
    return OptDecomposition(float(best[0]), float(best[1]), decision_from_drivers(inst, best[2]))
