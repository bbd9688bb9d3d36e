"""Solvers for implicit scenario families (every subset of R2 of size <= k)."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import (InsufficientDrivers, NegativeSurplus, ScenarioKindError, SurplusNotZero,
                      SurplusTooLarge)
from ..evaluate import eval_proxy
from ..matching import min_weight_max_cardinality_matching
from ..model import TOL, FirstStageDecision, MetricInstance, decision_from_drivers, surplus
from .explicit import opt2_candidates, solve_single_scenario


@dataclass(frozen=True)
class CenterSelection:
    center: int
    core_riders: tuple[int, ...]
    core_radius: float


@dataclass(frozen=True)
class OutlierLadder:
    ordered: tuple[int, ...]
    distances: tuple[float, ...] = ()


def _implicit_k(inst: MetricInstance) -> int:
    if inst.scenario_set.is_explicit:
        raise ScenarioKindError("solver needs an implicit scenario set")
    return inst.scenario_set.k


def _surplus_checked(inst: MetricInstance) -> int:
    ell = surplus(inst)
    if ell < 0:
        raise InsufficientDrivers(f"negative surplus {ell}")
    return ell


def solve_no_surplus(inst: MetricInstance) -> FirstStageDecision:
    """Solve the single scenario made of the k lowest-index R2 riders."""
    k = _implicit_k(inst)
    ell = _surplus_checked(inst)
    if ell != 0:
        raise SurplusNotZero(f"surplus is {ell}, expected 0")
    return solve_single_scenario(inst, range(k))


def select_center(inst: MetricInstance) -> CenterSelection:
    """Driver whose k-th nearest R2 rider is closest (ties: lowest driver index)."""
    k = _implicit_k(inst)
    if inst.n_r2 < k:
        raise ValueError(f"need at least k={k} second-stage riders")
    w = inst.r2_to_d().T  # drivers x riders
    order = np.argsort(w, axis=1, kind="stable")
    radii = np.take_along_axis(w, order[:, k - 1:k], axis=1)[:, 0]
    center = int(np.argmin(radii))
    core = tuple(sorted(int(r) for r in order[center, :k]))
    return CenterSelection(center, core, float(radii[center]))


def outlier_ladder(inst: MetricInstance, center: CenterSelection | int) -> OutlierLadder:
    """The l riders farthest from the center, farthest first (ties: lower index first)."""
    ell = surplus(inst)
    if ell < 0:
        raise NegativeSurplus(f"surplus is {ell}")
    c = center.center if isinstance(center, CenterSelection) else int(center)
    d = inst.r2_to_d(None, [c])[:, 0]
    if ell > d.size:
        raise ValueError(f"surplus {ell} exceeds |R2| = {d.size}")
    order = np.lexsort((np.arange(d.size), -d))[:ell]
    return OutlierLadder(tuple(int(r) for r in order), tuple(float(d[r]) for r in order))


def solve_small_surplus(inst: MetricInstance) -> FirstStageDecision:
    """Center/outlier configurations: for j = 0..l solve the single scenario
    core + first j ladder riders and keep the candidate with the smallest
    proxy value cost1 + max(cost2(core), cost2(ladder))."""
    k = _implicit_k(inst)
    ell = _surplus_checked(inst)
    if ell >= k:
        raise SurplusTooLarge(f"surplus {ell} is not below k={k}")
    if k * k > inst.n_r2 / 2:
        warnings.warn(f"k={k} exceeds sqrt(n/2) for n={inst.n_r2}; the approximation bound "
                      "is not guaranteed", stacklevel=2)
    center = select_center(inst)
    ladder = outlier_ladder(inst, center)
    s1 = list(center.core_riders)
    s2 = list(ladder.ordered)
    best_beta, best = math.inf, None
    for j in range(ell + 1):
        rep = sorted(set(s1) | set(s2[:j]))
        d1 = solve_single_scenario(inst, rep)
        beta = eval_proxy(inst, d1, s1, s2)
        if beta < best_beta - TOL:
            best_beta, best = beta, (d1, j)
    d1, j = best
    return decision_from_drivers(inst, d1.drivers, configuration=j, proxy_value=best_beta,
                                 center=center.center)


def supplier_radius(cf: np.ndarray, chosen: Sequence[int]) -> float:
    """Max over clients (rows) of the distance to the nearest chosen facility (column)."""
    if cf.shape[0] == 0:
        return 0.0
    return float(cf[:, list(chosen)].min(axis=1).max())


def p_supplier_matrix(cf: np.ndarray, cc: np.ndarray, p: int) -> tuple[int, ...]:
    """Threshold method for p-supplier on a client x facility matrix ``cf``
    with client-client distances ``cc``; returns p facility columns whose
    radius is at most 3 times optimal."""
    n, f = cf.shape
    if p > f:
        raise ValueError(f"p={p} exceeds the {f} facilities")
    if p <= 0:
        return ()
    if n == 0:
        return tuple(range(p))
    nearest = np.argmin(cf, axis=1)
    near_d = cf[np.arange(n), nearest]
    levels = np.unique(cf[np.isfinite(cf)])
    levels = levels[levels >= near_d.max()]
    picked: list[int] = []
    for r in levels:
        marked = np.zeros(n, dtype=bool)
        picked = []
        for c in range(n):
            if marked[c]:
                continue
            picked.append(int(nearest[c]))
            if len(picked) > p:
                break
            marked |= cc[c] <= 2 * r
        if len(picked) <= p:
            break
    chosen = list(dict.fromkeys(picked))
    for j in range(f):
        if len(chosen) >= p:
            break
        if j not in chosen:
            chosen.append(j)
    return tuple(sorted(chosen))


def p_supplier_3approx(inst: MetricInstance, clients: Sequence[int], facilities: Sequence[int],
                       p: int) -> tuple[int, ...]:
    """p drivers covering the R2 riders ``clients`` within 3x the optimal radius."""
    clients = list(clients)
    facilities = list(facilities)
    cols = p_supplier_matrix(inst.r2_to_d(clients, facilities), inst.r2_to_r2(clients, clients), p)
    return tuple(sorted(facilities[j] for j in cols))


def prune_reserved(inst: MetricInstance, reserved: Sequence[int], radius: float) -> tuple[int, ...]:
    """Scan reserved drivers by index; each survivor deletes every other
    reserved driver within ``radius`` of it."""
    kept = sorted(reserved)
    alive = dict.fromkeys(kept, True)
    dd = inst.d_to_d(kept, kept)
    for a in range(len(kept)):
        if not alive[kept[a]]:
            continue
        for b in range(len(kept)):
            if b != a and alive[kept[b]] and dd[a, b] <= radius:
                alive[kept[b]] = False
    return tuple(j for j in kept if alive[j])


def k1_worst(inst: MetricInstance, drivers: Sequence[int]) -> float:
    """Worst single-rider scenario: max over R2 of the distance to the nearest free driver."""
    chosen = set(drivers)
    avail = [j for j in range(inst.n_d) if j not in chosen]
    if not avail:
        raise InsufficientDrivers("no driver left for the second stage")
    return float(inst.r2_to_d(None, avail).min(axis=1).max())


def solve_k1(inst: MetricInstance) -> FirstStageDecision:
    """Reserve p = |D| - |R1| drivers by p-supplier, prune reserved drivers
    closer than 8*guess, match R1 into the rest, keep the best exact total."""
    k = _implicit_k(inst)
    if k != 1:
        raise ScenarioKindError(f"solve_k1 needs k=1, got k={k}")
    m = inst.n_r1
    if inst.n_d <= m:
        raise InsufficientDrivers(f"{inst.n_d} drivers cannot leave one free after {m} riders")
    if inst.n_r2 == 1:
        # a single rider is a single scenario, which the exact solver handles
        return solve_single_scenario(inst, [0])
    p = inst.n_d - m
    reserved = p_supplier_3approx(inst, range(inst.n_r2), range(inst.n_d), p)
    w1 = inst.r1_to_d()
    cache: dict = {}
    best_total, best = math.inf, None
    for g in opt2_candidates(inst).candidates:
        kept = prune_reserved(inst, reserved, 8.0 * float(g))
        if kept not in cache:
            rest = [j for j in range(inst.n_d) if j not in set(kept)]
            mt = min_weight_max_cardinality_matching(w1[:, rest])
            if len(mt) < m:
                cache[kept] = None
            else:
                drivers = tuple(sorted(rest[j] for j in mt.right))
                total = mt.total_weight / m + k1_worst(inst, drivers)
                cache[kept] = (drivers, total)
        hit = cache[kept]
        if hit is not None and hit[1] < best_total - TOL:
            best_total, best = hit[1], (hit[0], float(g))
    if best is None:
        raise InsufficientDrivers("no OPT2 guess leaves R1 matchable")
    return decision_from_drivers(inst, best[0], opt2_guess=best[1])
