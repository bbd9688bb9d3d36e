"""Two-stage robust matching with bottleneck second stage: solvers,
evaluators, exhaustive oracles, and instance generators."""

from .errors import *  # noqa: F401,F403
from .evaluate import (DEFAULT_ENUM_LIMIT, OptDecomposition, brute_force_opt, eval_explicit,
                       eval_implicit_bruteforce, eval_proxy, eval_stochastic, eval_tsrm, evaluate)
from .kernels import BACKEND
from .matching import (FORBIDDEN, Matching, bottleneck_feasible, bottleneck_matching,
                       max_cardinality_matching, min_weight_max_cardinality_matching,
                       min_weight_perfect_matching)
from .model import (FirstStageDecision, MetricInstance, ScenarioSet, SolveReport, cost1, cost2,
                    decision_from_drivers, metric_closure, surplus, validate)
from .solvers import *  # noqa: F401,F403
from .variants import (ScenarioDistribution, solve_tsrm_balanced, solve_tsrm_greedy,
                       solve_tsrm_no_surplus, solve_tssmb_no_surplus, tsrbb_cost1)

__version__ = "0.1.0"
