"""Regular confidence intervals: Hoeffding and empirical-Bernstein rules.

A rule supplies UCB/LCB evaluators together with three regularity
functions: n_good(t, mu) bounds the samples after which the interval
width drops below mu on the good event, n_as(t, mu) bounds it almost
surely, and failure_budget(T) caps the total probability mass of
good-event failures up to round T. The contract n_good <= n_as and
n_good(t, 0) = n_as(t, 0) = t - 1 holds for both rules.

All bound evaluators read the state as it stands BEFORE the current
round and use ln of the current round index. Unvisited arms get the
interval (-inf, +inf).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import RunState, empirical_variance

INF = math.inf


def hoeffding_bounds(state: RunState, a: int, t: int) -> tuple[float, float]:
    """Mean +/- sqrt(3 ln t / (2 n)); (-inf, +inf) when arm a is unqueried."""
    n = state.queries[a]
    if n == 0:
        return -INF, INF
    lg = math.log(t)
    rhat = state.sums[a] / n
    w = math.sqrt(3.0 * lg / (2.0 * n))
    return rhat - w, rhat + w


def hoeffding_n_good(t: int, mu: float) -> float:
    """min{6 ln t / mu^2, t - 1}; t - 1 by convention at mu = 0."""
    if mu == 0.0:
        return t - 1.0
    return min(6.0 * math.log(t) / (mu * mu), t - 1.0)


def hoeffding_n_as(t: int, mu: float) -> float:
    return hoeffding_n_good(t, mu)


def bernstein_bounds(state: RunState, a: int, t: int) -> tuple[float, float]:
    """Variance-adaptive interval; (-inf, +inf) when n <= 1.

    Half-width sqrt(6 V ln t / n) + 7 ln t / (n - 1) with V the unbiased
    empirical variance.
    """
    n = state.queries[a]
    if n <= 1:
        return -INF, INF
    lg = math.log(t)
    rhat = state.sums[a] / n
    v = empirical_variance(state, a)
    w = math.sqrt(6.0 * v * lg / n) + 7.0 * lg / (n - 1.0)
    return rhat - w, rhat + w


def bernstein_n_good(t: int, mu: float, variance: float) -> float:
    """min{24 V ln t / mu^2 + 52 ln t / mu + 1, t - 1}, with V the TRUE variance."""
    if mu == 0.0:
        return t - 1.0
    lg = math.log(t)
    return min(24.0 * variance * lg / (mu * mu) + 52.0 * lg / mu + 1.0, t - 1.0)


def bernstein_n_as(t: int, mu: float, variant: int = 2) -> float:
    """Almost-sure shrink count, distribution-free.

    variant 1: min{6 ln t / mu^2 + 28 ln t / mu + 1, t - 1}.
    variant 2: min{(sqrt(3 ln t / (2 mu^2)) + sqrt(3 ln t / (2 mu^2)
               + 14 ln t / mu))^2 + 1, t - 1}, never above variant 1.
    """
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant}")
    if mu == 0.0:
        return t - 1.0
    lg = math.log(t)
    if variant == 1:
        return min(6.0 * lg / (mu * mu) + 28.0 * lg / mu + 1.0, t - 1.0)
    h = 3.0 * lg / (2.0 * mu * mu)
    root = math.sqrt(h) + math.sqrt(h + 14.0 * lg / mu)
    return min(root * root + 1.0, t - 1.0)


def sample_count_for_width(c1: float, c2: float, mu: float) -> float:
    """Smallest n0 with c1/sqrt(n) + c2/n < mu for every n > n0.

    Closed form c1^2/mu^2 + 2 c2/mu.
    """
    if mu <= 0.0:
        raise ValueError(f"mu must be positive, got {mu}")
    if c1 < 0.0 or c2 < 0.0:
        raise ValueError("coefficients must be nonnegative")
    return c1 * c1 / (mu * mu) + 2.0 * c2 / mu


@dataclass(frozen=True)
class ConfidenceRule:
    """Bundle of interval evaluators and regularity functions.

    name is the config-facing identifier ("hoeffding" | "bernstein").
    kernel_id selects the matching branch in the compiled episode loop.
    """

    name: str
    kernel_id: int

    def bounds(self, state: RunState, a: int, t: int) -> tuple[float, float]:
        if self.kernel_id == 0:
            return hoeffding_bounds(state, a, t)
        return bernstein_bounds(state, a, t)

    def ucb(self, state: RunState, a: int, t: int) -> float:
        return self.bounds(state, a, t)[1]

    def lcb(self, state: RunState, a: int, t: int) -> float:
        return self.bounds(state, a, t)[0]

    def ci_width(self, state: RunState, a: int, t: int) -> float:
        lo, hi = self.bounds(state, a, t)
        return hi - lo

    def n_good(self, t: int, mu: float, variance: float | None = None) -> float:
        if self.kernel_id == 0:
            return hoeffding_n_good(t, mu)
        if variance is None:
            # distribution-free fallback: rewards in [0,1] have V <= 1/4
            variance = 0.25
        # the almost-sure count is itself a valid good-event count, so the
        # smaller of the two serves as n_good and keeps n_good <= n_as
        return min(bernstein_n_good(t, mu, variance), bernstein_n_as(t, mu, 2))

    def n_as(self, t: int, mu: float) -> float:
        if self.kernel_id == 0:
            return hoeffding_n_as(t, mu)
        return bernstein_n_as(t, mu, 2)

    def failure_budget(self, t: int, n_arms: int) -> float:
        """Total good-event failure mass C(t): 2K (Hoeffding), 12K (Bernstein)."""
        if self.kernel_id == 0:
            return 2.0 * n_arms
        return 12.0 * n_arms


HOEFFDING = ConfidenceRule(name="hoeffding", kernel_id=0)
BERNSTEIN = ConfidenceRule(name="bernstein", kernel_id=1)

_RULES = {r.name: r for r in (HOEFFDING, BERNSTEIN)}


def rule_by_name(name: str) -> ConfidenceRule:
    try:
        return _RULES[name]
    except KeyError:
        raise ValueError(f"unknown confidence rule {name!r}; expected one of {sorted(_RULES)}") from None
