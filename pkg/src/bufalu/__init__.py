"""Simulation and bound calculators for bandits with actively queried feedback."""

from .bounds import (BoundReport, Family, QueryFloors, ScarceFloor, UpperBounds,
                     asymptotic_query_floor, budget_inverse, build_report,
                     check_family, kinf_minus, kinf_plus, kl_bernoulli,
                     paired_separation_floor, problem_independent_regret_bound,
                     regret_query_upper_bounds, scarce_regret_floor)
from .confidence import (BERNSTEIN, HOEFFDING, ConfidenceRule, bernstein_bounds,
                         bernstein_n_as, bernstein_n_good, hoeffding_bounds,
                         hoeffding_n_as, hoeffding_n_good, rule_by_name,
                         sample_count_for_width)
from .core import (ArmKind, ArmModel, BanditInstance, RunState, empirical_mean,
                   empirical_variance, update)
from .environment import EpisodeRng, reward_tape, sample_reward
from .policies import (POLICY_IDS, POLICY_NAMES, Decision, bufalu_decide,
                       bufau_decide, cbm_decide, decider, greedy_decide)
from .schedules import (EpsilonSchedule, eps_array, epsilon_inverse, l_epsilon,
                        n_bar, n_bar_as)
from .simulator import (BatchResult, BatchStats, EpisodeTrace, MetricStats,
                        cost_aware_regret, default_checkpoints, good_event_holds,
                        run_batch, run_episode)

__version__ = "0.1.0"

__all__ = [
    "ArmKind", "ArmModel", "BanditInstance", "RunState",
    "empirical_mean", "empirical_variance", "update",
    "ConfidenceRule", "HOEFFDING", "BERNSTEIN", "rule_by_name",
    "hoeffding_bounds", "hoeffding_n_good", "hoeffding_n_as",
    "bernstein_bounds", "bernstein_n_good", "bernstein_n_as",
    "sample_count_for_width",
    "EpsilonSchedule", "eps_array", "epsilon_inverse", "l_epsilon", "n_bar",
    "n_bar_as",
    "Decision", "POLICY_IDS", "POLICY_NAMES", "decider",
    "bufalu_decide", "bufau_decide", "cbm_decide", "greedy_decide",
    "EpisodeRng", "sample_reward", "reward_tape",
    "EpisodeTrace", "BatchStats", "BatchResult", "MetricStats",
    "run_episode", "run_batch", "cost_aware_regret", "good_event_holds",
    "default_checkpoints",
    "Family", "check_family", "kl_bernoulli", "kinf_plus", "kinf_minus",
    "QueryFloors", "ScarceFloor", "UpperBounds",
    "asymptotic_query_floor", "paired_separation_floor", "budget_inverse",
    "scarce_regret_floor", "regret_query_upper_bounds",
    "problem_independent_regret_bound", "BoundReport", "build_report",
    "__version__",
]
