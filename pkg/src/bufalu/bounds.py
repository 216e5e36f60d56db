"""Computable theory: KL floors, budget inversion, and bound predictions.

Lower bounds: per-arm asymptotic query floors (coefficients of ln T),
the paired separation floor maximized over the mean interval, and the
scarce-querying regret floor obtained by inverting a budget profile.
Upper bounds: the gap-dependent regret/query predictions and the
problem-independent regret bound, both evaluated through the schedule
quantities l_epsilon and n_bar so they can be compared directly against
simulation output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .confidence import ConfidenceRule
from .core import ArmKind, BanditInstance
from .schedules import EpsilonSchedule, l_epsilon, n_bar, n_bar_as

INF = math.inf


class Family(Enum):
    """Ambient distribution class the change-of-measure floors live in."""

    BERNOULLI = "bernoulli"
    GAUSSIAN_UNIT = "gaussian"

    @staticmethod
    def parse(name: str) -> "Family":
        for fam in Family:
            if fam.value == name:
                return fam
        raise ValueError(f"unknown family {name!r}; expected 'bernoulli' or 'gaussian'")


def kl_bernoulli(p: float, q: float) -> float:
    """KL divergence between Bernoulli(p) and Bernoulli(q).

    0 ln 0 = 0; crossing an absolute-continuity boundary (q in {0, 1}
    with p != q) gives +inf.
    """
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError(f"kl arguments must lie in [0, 1], got p={p}, q={q}")
    if p == q:
        return 0.0
    if q == 0.0 or q == 1.0:
        return INF
    acc = 0.0
    if p > 0.0:
        acc += p * math.log(p / q)
    if p < 1.0:
        acc += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return acc


def _check_family_mean(family: Family, m: float) -> None:
    if family is Family.BERNOULLI and not 0.0 <= m <= 1.0:
        raise ValueError(f"bernoulli family means must lie in [0, 1], got {m}")


def kinf_plus(family: Family, m: float, mu: float) -> float:
    """Distance from a mean-m member to the closest one with mean above mu.

    The infimum over the open half-space {mean > mu} is the boundary
    value by continuity: kl(m, mu) for Bernoulli, (mu - m)^2 / 2 for
    unit-variance Gaussians, and 0 when mu <= m (the arm itself
    qualifies in the closure).
    """
    _check_family_mean(family, m)
    if family is Family.BERNOULLI:
        _check_family_mean(family, mu)
        if mu <= m:
            return 0.0
        return kl_bernoulli(m, mu)
    if mu <= m:
        return 0.0
    d = mu - m
    return d * d / 2.0


def kinf_minus(family: Family, m: float, mu: float) -> float:
    """Mirror of kinf_plus toward means below mu."""
    _check_family_mean(family, m)
    if family is Family.BERNOULLI:
        _check_family_mean(family, mu)
        if mu >= m:
            return 0.0
        return kl_bernoulli(m, mu)
    if mu >= m:
        return 0.0
    d = m - mu
    return d * d / 2.0


def check_family(instance: BanditInstance, family: Family) -> None:
    """Reject instances the family cannot represent.

    Bernoulli is strict (only bernoulli arms). The Gaussian family also
    admits deterministic arms, treating them as mean-parameterized
    members when computing floors.
    """
    for i, arm in enumerate(instance.arms):
        if family is Family.BERNOULLI and arm.kind is not ArmKind.BERNOULLI:
            raise ValueError(f"arm {i} ({arm.kind.value}) is not representable in the bernoulli family")
        if family is Family.GAUSSIAN_UNIT and arm.kind is ArmKind.BERNOULLI:
            raise ValueError(f"arm {i} (bernoulli) is not representable in the gaussian family")


@dataclass(frozen=True)
class QueryFloors:
    """ln T coefficients per arm; +inf marks super-logarithmic demand."""

    per_arm: tuple
    super_logarithmic: bool


def _inverse(x: float) -> float:
    if x == 0.0:
        return INF
    if x == INF:
        return 0.0
    return 1.0 / x


def asymptotic_query_floor(instance: BanditInstance, family: Family) -> QueryFloors:
    """Per-arm lower-bound coefficients: n_T(a) = Omega(coef * ln T).

    Suboptimal arms get 1/kinf_plus(m_a, mu*). A unique optimal arm gets
    1/kinf_minus(m*, mu^s) against the best suboptimal mean. With
    several optimal arms the per-arm part does not apply (coefficient 0)
    and the super-logarithmic flag reports whether the stated conditions
    force infinite normalized querying of some optimal arm.
    """
    check_family(instance, family)
    mu_star = instance.mu_star
    optimal = set(instance.optimal_set)
    means = [arm.mean for arm in instance.arms]
    sub_means = [m for i, m in enumerate(means) if i not in optimal]
    mu_s = max(sub_means) if sub_means else None

    coefs = []
    for i, m in enumerate(means):
        if i not in optimal:
            coefs.append(_inverse(kinf_plus(family, m, mu_star)))
        elif len(optimal) == 1 and mu_s is not None:
            coefs.append(_inverse(kinf_minus(family, m, mu_s)))
        else:
            coefs.append(0.0)

    flag = False
    if len(optimal) >= 2:
        cond1 = all(kinf_minus(family, means[i], mu_star) == 0.0 for i in optimal)
        cond2 = sum(1 for i in optimal if kinf_plus(family, means[i], mu_star) == 0.0) >= 2
        flag = cond1 or cond2
    return QueryFloors(per_arm=tuple(coefs), super_logarithmic=flag)


def _golden_min(f: Callable[[float], float], lo: float, hi: float,
                tol: float = 1e-9, max_iter: int = 200) -> float:
    """Golden-section minimizer for a unimodal objective on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    it = 0
    while b - a > tol and it < max_iter:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
        it += 1
    return 0.5 * (a + b)


def paired_separation_floor(instance: BanditInstance, family: Family, a: int) -> float:
    """Joint query floor for a suboptimal arm and the unique optimal arm.

    Maximizes 1/max{kinf_plus(m_a, mu), kinf_minus(m*, mu)} over
    mu in [mu^s, mu*]. For the Gaussian family the optimizer must be the
    gap midpoint whenever the midpoint lies in the interval, giving the
    closed form 8/gap^2; this is asserted.
    """
    check_family(instance, family)
    if len(instance.optimal_set) != 1:
        raise ValueError("paired separation floor needs a unique optimal arm")
    if a in instance.optimal_set:
        raise ValueError(f"arm {a} is optimal; the floor pairs a suboptimal arm with the optimum")
    means = [arm.mean for arm in instance.arms]
    mu_star = instance.mu_star
    m_a = means[a]
    mu_s = max(m for i, m in enumerate(means) if i not in instance.optimal_set)

    def objective(mu: float) -> float:
        return max(kinf_plus(family, m_a, mu), kinf_minus(family, mu_star, mu))

    mu_opt = _golden_min(objective, mu_s, mu_star)
    val = objective(mu_opt)
    if family is Family.GAUSSIAN_UNIT:
        midpoint = m_a + (mu_star - m_a) / 2.0
        if mu_s <= midpoint <= mu_star:
            assert abs(mu_opt - midpoint) < 1e-6, (mu_opt, midpoint)
    return _inverse(val)


def budget_inverse(budget: Callable[[int], float], x: float,
                   probe_cap: int = 10**12) -> float:
    """sup{t in N : B(t) <= x} for a nondecreasing budget profile.

    0 when B(1) > x; +inf when the budget never exceeds x up to the
    probe cap. Found by doubling probes then binary search; a decrease
    between probes raises, since the inversion is meaningless there.
    """
    b1 = budget(1)
    if b1 > x:
        return 0.0
    lo, prev = 1, b1
    hi = None
    t = 2
    while t <= probe_cap:
        bt = budget(t)
        if bt < prev:
            raise ValueError(f"budget profile decreases between probes at t={t}")
        if bt > x:
            hi = t
            break
        lo, prev = t, bt
        t *= 2
    if hi is None:
        return INF
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if budget(mid) <= x:
            lo = mid
        else:
            hi = mid
    return float(lo)


@dataclass(frozen=True)
class ScarceFloor:
    applicable: bool
    threshold: float
    value: float


def scarce_regret_floor(instance: BanditInstance, family: Family,
                        budgets, horizon: int) -> ScarceFloor:
    """Regret floor under per-arm query budgets.

    budgets maps arm index -> budget function B_a(t). Each suboptimal
    arm contributes (gap / 2K) * B_a^{-1}(1 / (8 K kinf_plus)). The sum
    only binds for horizons past the largest inverted point; below that
    the report is marked not applicable (value still returned).
    """
    check_family(instance, family)
    k = instance.n_arms
    mu_star = instance.mu_star
    total = 0.0
    threshold = 0.0
    for a, arm in enumerate(instance.arms):
        gap = instance.gaps[a]
        if gap <= 0.0:
            continue
        kp = kinf_plus(family, arm.mean, mu_star)
        x = _inverse(8.0 * k * kp) if kp > 0.0 else INF
        inv = budget_inverse(budgets[a], x)
        threshold = max(threshold, inv)
        total += gap / (2.0 * k) * inv
    return ScarceFloor(applicable=horizon >= threshold, threshold=threshold, value=total)


@dataclass(frozen=True)
class UpperBounds:
    """Gap-dependent regret/query predictions at the horizon.

    The _general variants use the (K + C(T)) constant in place of 3K;
    they coincide for the Hoeffding rule.
    """

    regret: float
    queries: float
    regret_general: float
    queries_general: float
    arm_cap: float
    unique_optimal: bool


def regret_query_upper_bounds(instance: BanditInstance, schedule: EpsilonSchedule,
                              rule: ConfidenceRule, horizon: int) -> UpperBounds:
    """Predicted ceilings on mean regret and mean total queries.

    Unique-optimal instances use the halved-gap arguments (separation
    needs both sides estimated to gap/2); with several optimal arms the
    full gaps enter and each optimal arm may be queried up to
    N-bar(T, 0) = T - 1 times.
    """
    k = instance.n_arms
    gaps = instance.gaps
    variances = instance.variances
    optimal = instance.optimal_set
    unique = len(optimal) == 1
    delta_max = instance.delta_max

    reg = 0.0
    qrs = 0.0
    for a in range(k):
        gap = float(gaps[a])
        if gap <= 0.0:
            continue
        arg = gap / 2.0 if unique else gap
        nb = n_bar(schedule, horizon, arg, rule, variance=float(variances[a]))
        reg += gap * (nb + l_epsilon(schedule, horizon, gap))
        qrs += nb
    if unique:
        a_star = optimal[0]
        dmin = instance.delta_min
        qrs += n_bar(schedule, horizon, dmin / 2.0, rule, variance=float(variances[a_star]))
    else:
        for a_star in optimal:
            qrs += n_bar(schedule, horizon, 0.0, rule, variance=float(variances[a_star]))

    const = rule.failure_budget(horizon, k) + k
    return UpperBounds(
        regret=reg + 3.0 * k * delta_max,
        queries=qrs + 3.0 * k,
        regret_general=reg + const * delta_max,
        queries_general=qrs + const,
        arm_cap=n_bar_as(schedule, horizon, rule) + 1.0,
        unique_optimal=unique,
    )


def problem_independent_regret_bound(horizon: int, n_arms: int,
                                     schedule: EpsilonSchedule,
                                     delta_max: float) -> float:
    """4 sqrt(6 K T ln T) + sum_t eps(t) + 3 K delta_max, exact sum."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    eps_sum = sum(schedule.eval_total(t) for t in range(1, horizon + 1))
    return (4.0 * math.sqrt(6.0 * n_arms * horizon * math.log(horizon))
            + eps_sum + 3.0 * n_arms * delta_max)


@dataclass
class BoundReport:
    """Everything the bounds CLI subcommand emits for one configuration."""

    family: str
    horizon: int
    query_floors: QueryFloors
    paired_floors: dict = field(default_factory=dict)
    scarce: ScarceFloor | None = None
    upper: UpperBounds | None = None
    problem_independent: float = 0.0

    def as_dict(self) -> dict:
        d = {
            "family": self.family,
            "horizon": self.horizon,
            "query_floor_per_arm": list(self.query_floors.per_arm),
            "super_logarithmic": self.query_floors.super_logarithmic,
            "paired_floor_per_arm": {str(k): v for k, v in self.paired_floors.items()},
            "problem_independent_regret_bound": self.problem_independent,
        }
        if self.scarce is not None:
            d["scarce_floor"] = {"applicable": self.scarce.applicable,
                                 "threshold": self.scarce.threshold,
                                 "value": self.scarce.value}
        if self.upper is not None:
            d["upper_bounds"] = {"regret": self.upper.regret,
                                 "queries": self.upper.queries,
                                 "regret_general": self.upper.regret_general,
                                 "queries_general": self.upper.queries_general,
                                 "per_arm_query_cap": self.upper.arm_cap,
                                 "unique_optimal": self.upper.unique_optimal}
        return d


def build_report(instance: BanditInstance, family: Family,
                 schedule: EpsilonSchedule, rule: ConfidenceRule,
                 horizon: int) -> BoundReport:
    """Assemble the full report for an instance/schedule/rule triple.

    The scarce floor uses the schedule's own almost-sure per-arm query
    profile B_a(t) = n_as(t, eps(t)) + 1 as the budget being inverted.
    """
    floors = asymptotic_query_floor(instance, family)
    paired = {}
    if len(instance.optimal_set) == 1:
        for a in range(instance.n_arms):
            if instance.gaps[a] > 0.0:
                paired[a] = paired_separation_floor(instance, family, a)

    def profile(t: int) -> float:
        return rule.n_as(t, schedule.eval_total(t)) + 1.0

    budgets = {a: profile for a in range(instance.n_arms)}
    scarce = scarce_regret_floor(instance, family, budgets, horizon)
    upper = regret_query_upper_bounds(instance, schedule, rule, horizon)
    indep = problem_independent_regret_bound(horizon, instance.n_arms, schedule,
                                             instance.delta_max)
    return BoundReport(family=family.value, horizon=horizon, query_floors=floors,
                       paired_floors=paired, scarce=scarce, upper=upper,
                       problem_independent=indep)
