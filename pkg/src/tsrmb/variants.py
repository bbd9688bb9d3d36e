"""Variants: expected second stage (TSSMB), total-weight costs (TSRM),
and the bottleneck first-stage cost used by TSRBB."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InsufficientDrivers, SurplusNotZero
from .evaluate import check_probs, eval_stochastic, eval_tsrm
from .matching import bottleneck_value, min_weight_perfect_matching
from .model import TOL, FirstStageDecision, MetricInstance, as_decision, decision_from_drivers, surplus
from .solvers.explicit import solve_greedy, solve_single_scenario


@dataclass(frozen=True)
class ScenarioDistribution:
    probs: tuple[float, ...]

    @classmethod
    def uniform(cls, p: int) -> "ScenarioDistribution":
        return cls(tuple([1.0 / p] * p))


def _no_surplus(inst: MetricInstance):
    ell = surplus(inst)  # raises NonUniformScenarios for mixed sizes
    if ell < 0:
        raise InsufficientDrivers(f"negative surplus {ell}")
    if ell != 0:
        raise SurplusNotZero(f"surplus is {ell}, expected 0")


def solve_tssmb_no_surplus(inst: MetricInstance, dist: ScenarioDistribution | None = None
                           ) -> FirstStageDecision:
    """Solve each scenario exactly and keep the best expected total."""
    scen = inst.scenarios()
    _no_surplus(inst)
    probs = check_probs(inst, dist.probs if dist is not None else [1.0 / len(scen)] * len(scen))
    best_val, best = math.inf, None
    for idx, s in enumerate(scen):
        d1 = solve_single_scenario(inst, s)
        val = eval_stochastic(inst, d1, probs)
        if val < best_val - TOL:
            best_val, best = val, (d1, idx)
    return decision_from_drivers(inst, best[0].drivers, scenario=best[1])


def solve_tsrm_greedy(inst: MetricInstance) -> FirstStageDecision:
    """Min total-weight matching of R1 into all drivers (same D1 as greedy)."""
    return solve_greedy(inst)


def solve_tsrm_no_surplus(inst: MetricInstance) -> FirstStageDecision:
    """Reserve the cheapest home D2 for the lowest-index scenario, then match
    R1 into the remaining drivers at minimum total weight."""
    scen = inst.scenarios()
    _no_surplus(inst)
    s = list(scen[0])
    m2 = min_weight_perfect_matching(inst.r2_to_d(s))
    reserved = set(m2.right)
    rest = [j for j in range(inst.n_d) if j not in reserved]
    m1 = min_weight_perfect_matching(inst.r1_to_d(rest))
    return decision_from_drivers(inst, [rest[j] for j in m1.right])


def solve_tsrm_balanced(inst: MetricInstance) -> FirstStageDecision:
    """The cheaper of greedy and the reserve-first solution under total weights
    (ties keep greedy)."""
    _no_surplus(inst)
    a = solve_tsrm_greedy(inst)
    b = solve_tsrm_no_surplus(inst)
    ta = eval_tsrm(inst, a).total
    tb = eval_tsrm(inst, b).total
    if tb < ta - TOL:
        return decision_from_drivers(inst, b.drivers, picked="reserve-first")
    return decision_from_drivers(inst, a.drivers, picked="greedy")


def tsrbb_cost1(inst: MetricInstance, d1) -> float:
    """Bottleneck first-stage cost: least possible longest edge over perfect
    matchings of R1 onto D1."""
    d1 = as_decision(inst, d1)
    return bottleneck_value(inst.r1_to_d(list(d1.drivers)))
