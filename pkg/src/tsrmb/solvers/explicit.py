"""Solvers for explicit scenario lists: greedy, exact single scenario,
two-scenario merge, and recursive pairwise merging for p scenarios."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import kernels
from ..errors import InsufficientDrivers, NoPerfectMatching, ScenarioKindError
from ..evaluate import eval_explicit
from ..matching import FORBIDDEN, max_cardinality_matching, min_weight_perfect_matching
from ..model import TOL, FirstStageDecision, MetricInstance, cost2, decision_from_drivers


@dataclass(frozen=True)
class Opt2Guess:
    candidates: np.ndarray
    chosen: float | None = None


@dataclass(frozen=True)
class RepresentativeScenario:
    riders: tuple[int, ...]
    matched_pairs: tuple[tuple[int, int], ...]
    threshold: float


def opt2_candidates(inst: MetricInstance, riders: Sequence[int] | None = None) -> Opt2Guess:
    """Sorted distinct finite distances between scenario riders and drivers."""
    if riders is None:
        riders = inst.scenario_set.riders(inst.n_r2)
    w = inst.r2_to_d(list(riders))
    return Opt2Guess(np.unique(w[np.isfinite(w)]))


def _check_drivers(inst: MetricInstance, need: int):
    if inst.n_d < need:
        raise InsufficientDrivers(f"need {need} drivers, instance has {inst.n_d}")


def solve_greedy(inst: MetricInstance) -> FirstStageDecision:
    """Cheapest first-stage matching of R1 into all drivers, scenarios ignored."""
    _check_drivers(inst, inst.n_r1)
    m = min_weight_perfect_matching(inst.r1_to_d())
    return decision_from_drivers(inst, m.right)


def solve_single_scenario(inst: MetricInstance, scenario: Sequence[int] | None = None
                          ) -> FirstStageDecision:
    """Exact minimizer of cost1 + cost2(S) for one scenario S.

    For a threshold w, riders of S may only use drivers within w and cost
    nothing; R1 keeps its real weights. A min-weight assignment of R1 and S
    then gives the cheapest D1 whose leftover drivers serve S within w.
    Feasibility is monotone in w, so the least feasible threshold is found
    by binary search; larger thresholds are scanned until w alone exceeds
    the best total minus the greedy (least possible) cost1.
    """
    if scenario is None:
        scen = inst.scenarios()
        if len(scen) != 1:
            raise ScenarioKindError(f"expected exactly one scenario, instance has {len(scen)}")
        scenario = scen[0]
    s = sorted(set(int(r) for r in scenario))
    m = inst.n_r1
    _check_drivers(inst, m + len(s))
    if not s:
        return solve_greedy(inst)
    w1 = inst.r1_to_d()
    w2 = inst.r2_to_d(s)
    levels = np.unique(w2[np.isfinite(w2)])
    comb = np.empty((m + len(s), inst.n_d))
    comb[:m] = w1
    mask = np.empty(comb.shape, dtype=bool)
    mask[:m] = np.isfinite(w1)

    def feasible(t):
        mask[m:] = w2 <= t
        return int((kernels.hopcroft_karp(mask) >= 0).sum()) == comb.shape[0]

    if levels.size == 0 or not feasible(levels[-1]):
        raise NoPerfectMatching("R1 and the scenario cannot be served simultaneously")
    lo = int(np.searchsorted(levels, w2.min(axis=1).max()))
    hi = levels.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(levels[mid]):
            hi = mid
        else:
            lo = mid + 1

    c1_floor = min_weight_perfect_matching(w1).total_weight / m
    best_total, best = math.inf, None
    for idx in range(lo, levels.size):
        t = levels[idx]
        if t > best_total - c1_floor:
            break
        comb[m:] = np.where(w2 <= t, 0.0, FORBIDDEN)
        row_to_col, ok = kernels.hungarian(comb)
        if not ok:  # pragma: no cover - feasibility is monotone
            continue
        drivers = sorted(int(j) for j in row_to_col[:m])
        chosen = set(drivers)
        avail = [j for j in range(inst.n_d) if j not in chosen]
        c1 = sum(w1[i, row_to_col[i]] for i in range(m)) / m
        total = c1 + cost2(inst, avail, s)
        if total < best_total - TOL:
            best_total, best = total, (drivers, float(t))
    return decision_from_drivers(inst, best[0], opt2_guess=best[1])


def build_representative(inst: MetricInstance, s1: Sequence[int], s2: Sequence[int],
                         opt2_guess: float, factor: float = 2.0) -> RepresentativeScenario:
    """Merge ``s2`` into ``s1``: riders of s2 covered by a maximum matching
    of the s1-s2 graph with edges <= factor*guess are dropped."""
    s1 = sorted(set(int(r) for r in s1))
    s2 = sorted(set(int(r) for r in s2))
    threshold = factor * float(opt2_guess)
    if not s1 or not s2:
        return RepresentativeScenario(tuple(sorted(set(s1) | set(s2))), (), threshold)
    w = inst.r2_to_r2(s1, s2)
    w = np.where(w <= threshold, w, FORBIDDEN)
    m = max_cardinality_matching(w)
    pairs = tuple((s1[i], s2[j]) for i, j in m.pairs)
    matched = {b for _, b in pairs}
    riders = set(s1) | {r for r in s2 if r not in matched}
    return RepresentativeScenario(tuple(sorted(riders)), pairs, threshold)


def _merge_rounds(inst: MetricInstance, scen: list, guess: float) -> tuple[int, ...]:
    """Pairwise merging: round i folds S_{j+p/2^i} into S_j with threshold 2*3^(i-1)*guess."""
    cur = [tuple(s) for s in scen]
    p = len(cur)
    rounds = int(round(math.log2(p)))
    for i in range(1, rounds + 1):
        half = p >> i
        factor = 2.0 * 3 ** (i - 1)
        for j in range(half):
            cur[j] = build_representative(inst, cur[j], cur[j + half], guess, factor).riders
    return cur[0]


def _best_over_guesses(inst: MetricInstance, scen: list, name: str) -> FirstStageDecision:
    guesses = opt2_candidates(inst).candidates
    cache: dict = {}
    best_total, best = math.inf, None
    for g in guesses:
        rep = _merge_rounds(inst, scen, float(g))
        if rep not in cache:
            if len(rep) + inst.n_r1 > inst.n_d:
                cache[rep] = None
            else:
                try:
                    d1 = solve_single_scenario(inst, rep)
                    cache[rep] = (d1, eval_explicit(inst, d1).total)
                except NoPerfectMatching:
                    cache[rep] = None
        hit = cache[rep]
        if hit is None:
            continue
        if hit[1] < best_total - TOL:
            best_total, best = hit[1], (hit[0], float(g))
    if best is None:
        raise InsufficientDrivers(f"{name}: no OPT2 guess gives a feasible representative")
    return decision_from_drivers(inst, best[0].drivers, opt2_guess=best[1])


def solve_two_scenarios(inst: MetricInstance) -> FirstStageDecision:
    scen = list(inst.scenarios())
    if len(scen) != 2:
        raise ScenarioKindError(f"expected 2 explicit scenarios, got {len(scen)}")
    _check_drivers(inst, inst.n_r1 + max(len(s) for s in scen))
    return _best_over_guesses(inst, scen, "two-scenario")


def solve_p_scenarios(inst: MetricInstance) -> FirstStageDecision:
    """Recursive merge for any p >= 1; the list is padded to a power of two
    by repeating the last scenario."""
    scen = list(inst.scenarios())
    if not scen:
        raise ScenarioKindError("no scenarios")
    _check_drivers(inst, inst.n_r1 + max(len(s) for s in scen))
    size = 1 << (len(scen) - 1).bit_length()
    scen = scen + [scen[-1]] * (size - len(scen))
    return _best_over_guesses(inst, scen, "p-scenario")
