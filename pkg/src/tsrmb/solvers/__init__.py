from .explicit import (Opt2Guess, RepresentativeScenario, build_representative, opt2_candidates,
                       solve_greedy, solve_p_scenarios, solve_single_scenario, solve_two_scenarios)
from .implicit import (CenterSelection, OutlierLadder, outlier_ladder, p_supplier_3approx,
                       select_center, solve_k1, solve_no_surplus, solve_small_surplus)

__all__ = [
    "Opt2Guess", "RepresentativeScenario", "build_representative", "opt2_candidates",
    "solve_greedy", "solve_p_scenarios", "solve_single_scenario", "solve_two_scenarios",
    "CenterSelection", "OutlierLadder", "outlier_ladder", "p_supplier_3approx", "select_center",
    "solve_k1", "solve_no_surplus", "solve_small_surplus",
]
