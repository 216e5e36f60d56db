"""Episode loop, invariant monitoring, and multi-seed aggregation.

Two engines produce identical traces: a compiled kernel (default) and a
pure-Python reference built from the policy functions. Regret is
realized pseudo-regret, the sum of true gaps of played arms; rewards
only enter through the estimators.

Monitored counters per episode:
  query_gate   queried an arm whose interval was already within eps(t)
  unsafe_skip  skipped the query while the good event held and the
               played arm's gap exceeded eps(t)
  arm_cap      some arm's query count passed the almost-sure cap
  budget_cap   total queries passed B(T) + K (budget schedules only)

Which counters are hard failures depends on the policy's guarantees;
see EpisodeTrace.hard_violation.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import policies as pol
from ._kernel import episode_kernel
from .confidence import ConfidenceRule
from .core import BanditInstance, RunState, update
from .environment import reward_tape
from .schedules import EpsilonSchedule, eps_array, n_bar_as


def default_checkpoints(horizon: int, n_points: int = 200) -> np.ndarray:
    """Log-spaced grid of at most n_points rounds, always ending at the horizon."""
    grid = np.unique(np.concatenate([
        np.round(np.geomspace(1, horizon, num=min(n_points, horizon))),
        [horizon],
    ]).astype(np.int64))
    return grid


def good_event_holds(instance: BanditInstance, state: RunState,
                     rule: ConfidenceRule, t: int) -> bool:
    """True iff every arm's true mean sits inside its current interval."""
    for a in range(instance.n_arms):
        lo, hi = rule.bounds(state, a, t)
        if not (lo <= instance.arms[a].mean <= hi):
            return False
    return True


@dataclass
class EpisodeTrace:
    policy: str
    seed: int
    checkpoint_ts: np.ndarray
    checkpoint_regret: np.ndarray
    checkpoint_queries: np.ndarray
    checkpoint_arm_queries: np.ndarray
    final_plays: np.ndarray
    final_arm_queries: np.ndarray
    final_regret: float
    final_queries: int
    violations: dict

    @property
    def hard_violation(self) -> bool:
        """Counters that break a guarantee the policy actually carries.

        The width gate is structural for the three CI-gated policies.
        The skip-safety and per-arm cap guarantees are specific to
        bufalu. The total budget cap binds every policy whenever the
        schedule was derived from a budget.
        """
        v = self.violations
        if v["budget_cap"]:
            return True
        if self.policy in (pol.BUFALU, pol.BUFAU, pol.CBM) and v["query_gate"]:
            return True
        if self.policy == pol.BUFALU and (v["unsafe_skip"] or v["arm_cap"]):
            return True
        return False


def cost_aware_regret(trace: EpisodeTrace, c: float) -> float:
    """Pseudo-regret plus c per query spent."""
    if c < 0.0:
        raise ValueError(f"query cost must be >= 0, got {c}")
    return trace.final_regret + c * trace.final_queries


def _run_reference(policy_id: int, rule: ConfidenceRule, tape, gaps, mus,
                   eps, ckpt_ts, arm_cap: float):
    """Pure-Python twin of the kernel; same outputs, same float ops."""
    n_arms, horizon = tape.shape
    state = RunState(n_arms)
    name = {v: k for k, v in pol.POLICY_IDS.items()}[policy_id]
    decide = pol.decider(name)
    n_ckpt = len(ckpt_ts)
    ck_regret = np.zeros(n_ckpt, dtype=np.float64)
    ck_queries = np.zeros(n_ckpt, dtype=np.int64)
    ck_arm_queries = np.zeros((n_ckpt, n_arms), dtype=np.int64)
    ptr = 0
    regret = 0.0
    viol_gate = viol_skip = viol_cap = 0
    for t in range(1, horizon + 1):
        if t <= n_arms:
            a, q = t - 1, True
        else:
            e = eps[t - 1]
            d = decide(t, state, rule, e)
            a, q = d.arm, d.query
            if q:
                if not (rule.ci_width(state, a, t) > e):
                    viol_gate += 1
            else:
                good = True
                for j in range(n_arms):
                    lo, hi = rule.bounds(state, j, t)
                    if mus[j] < lo or mus[j] > hi:
                        good = False
                        break
                if good and gaps[a] > e:
                    viol_skip += 1
        r = tape[a, state.plays[a]]
        update(state, a, r, q)
        if q and float(state.queries[a]) > arm_cap:
            viol_cap += 1
        regret += gaps[a]
        if ptr < n_ckpt and t == ckpt_ts[ptr]:
            ck_regret[ptr] = regret
            ck_queries[ptr] = state.total_queries
            ck_arm_queries[ptr, :] = state.queries
            ptr += 1
    return (ck_regret, ck_queries, ck_arm_queries, state.plays.copy(),
            state.queries.copy(), regret, state.total_queries,
            viol_gate, viol_skip, viol_cap)


def run_episode(instance: BanditInstance, policy: str, schedule: EpsilonSchedule,
                rule: ConfidenceRule, horizon: int, seed: int,
                checkpoints: np.ndarray | None = None,
                experiment_id: str = "adhoc", engine: str = "kernel",
                _eps: np.ndarray | None = None,
                _arm_cap: float | None = None) -> EpisodeTrace:
    """One seeded episode.

    _eps and _arm_cap let run_batch reuse the schedule precomputations;
    standalone calls derive them here.
    """
    if horizon < instance.n_arms:
        raise ValueError(f"horizon {horizon} shorter than initialization ({instance.n_arms} arms)")
    if policy not in pol.POLICY_IDS:
        raise ValueError(f"unknown policy {policy!r}; expected one of {pol.POLICY_NAMES}")
    policy_id = pol.POLICY_IDS[policy]
    if checkpoints is None:
        checkpoints = default_checkpoints(horizon)
    ckpt_ts = np.asarray(checkpoints, dtype=np.int64)
    if ckpt_ts.size and (ckpt_ts[0] < 1 or ckpt_ts[-1] > horizon):
        raise ValueError("checkpoints must lie in [1, horizon]")
    eps = _eps if _eps is not None else np.asarray(eps_array(schedule, horizon))
    arm_cap = _arm_cap if _arm_cap is not None else n_bar_as(schedule, horizon, rule) + 1.0
    tape = reward_tape(instance, experiment_id, seed, horizon)
    gaps = instance.gaps
    mus = instance.means
    if engine == "kernel":
        out = episode_kernel(policy_id, rule.kernel_id, tape, gaps, mus,
                             eps, ckpt_ts, float(arm_cap))
    elif engine == "reference":
        out = _run_reference(policy_id, rule, tape, gaps, mus,
                             eps, ckpt_ts, float(arm_cap))
    else:
        raise ValueError(f"unknown engine {engine!r}")
    (ck_regret, ck_queries, ck_arm_queries, plays, queries, regret, total_q,
     viol_gate, viol_skip, viol_cap) = out
    budget_viol = 0
    if schedule.budget_derived:
        if total_q > schedule.total_budget(horizon) + instance.n_arms:
            budget_viol = 1
    return EpisodeTrace(
        policy=policy, seed=seed, checkpoint_ts=ckpt_ts,
        checkpoint_regret=ck_regret, checkpoint_queries=ck_queries,
        checkpoint_arm_queries=ck_arm_queries, final_plays=plays,
        final_arm_queries=queries, final_regret=float(regret),
        final_queries=int(total_q),
        violations={"query_gate": int(viol_gate), "unsafe_skip": int(viol_skip),
                    "arm_cap": int(viol_cap), "budget_cap": budget_viol},
    )


@dataclass(frozen=True)
class MetricStats:
    mean: float
    std: float
    q90: float
    max: float

    @staticmethod
    def of(values: np.ndarray) -> "MetricStats":
        x = np.asarray(values, dtype=np.float64)
        std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
        return MetricStats(mean=float(np.mean(x)), std=std,
                           q90=float(np.percentile(x, 90)), max=float(np.max(x)))


@dataclass(frozen=True)
class BatchStats:
    regret: MetricStats
    queries: MetricStats


@dataclass
class BatchResult:
    policy: str
    stats: BatchStats
    checkpoint_ts: np.ndarray
    mean_regret: np.ndarray
    mean_queries: np.ndarray
    traces: list
    hard_violation: bool


def run_batch(instance: BanditInstance, policy: str, schedule: EpsilonSchedule,
              rule: ConfidenceRule, horizon: int, seeds,
              checkpoints: np.ndarray | None = None,
              experiment_id: str = "adhoc", engine: str = "kernel",
              jobs: int = 1) -> BatchResult:
    """Independent episodes over the seed list, aggregated in seed order."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("need at least one seed")
    if checkpoints is None:
        checkpoints = default_checkpoints(horizon)
    eps = np.asarray(eps_array(schedule, horizon))
    arm_cap = n_bar_as(schedule, horizon, rule) + 1.0

    def one(seed: int) -> EpisodeTrace:
        return run_episode(instance, policy, schedule, rule, horizon, seed,
                           checkpoints=checkpoints, experiment_id=experiment_id,
                           engine=engine, _eps=eps, _arm_cap=arm_cap)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            traces = list(pool.map(one, seeds))
    else:
        traces = [one(s) for s in seeds]

    regrets = np.array([tr.final_regret for tr in traces])
    queries = np.array([tr.final_queries for tr in traces], dtype=np.float64)
    stats = BatchStats(regret=MetricStats.of(regrets), queries=MetricStats.of(queries))
    mean_regret = np.mean([tr.checkpoint_regret for tr in traces], axis=0)
    mean_queries = np.mean([tr.checkpoint_queries for tr in traces], axis=0)
    return BatchResult(policy=policy, stats=stats,
                       checkpoint_ts=np.asarray(checkpoints, dtype=np.int64),
                       mean_regret=mean_regret, mean_queries=mean_queries,
                       traces=traces,
                       hard_violation=any(tr.hard_violation for tr in traces))
