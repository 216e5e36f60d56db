"""Domain types and sufficient-statistics bookkeeping.

Rewards in this setting are only observed when actively queried, so the
per-arm statistics split into play counts (how often an arm was pulled)
and query counts (how often its reward was actually seen). All estimators
are computed from the queried observations alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class ArmKind(Enum):
    BERNOULLI = "bernoulli"
    GAUSSIAN_UNIT = "gaussian_unit"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class ArmModel:
    """A single arm's reward distribution.

    Parameters
    ----------
    kind : ArmKind
        One of bernoulli (parameter p in [0, 1]), gaussian_unit
        (unit-variance normal with the given mean), or deterministic
        (constant value in [0, 1]).
    param : float
        p, the mean, or the constant value respectively.
    """

    kind: ArmKind
    param: float

    def __post_init__(self) -> None:
        if self.kind is ArmKind.BERNOULLI and not 0.0 <= self.param <= 1.0:
            raise ValueError(f"bernoulli parameter must lie in [0, 1], got {self.param}")
        if self.kind is ArmKind.DETERMINISTIC and not 0.0 <= self.param <= 1.0:
            raise ValueError(f"deterministic value must lie in [0, 1], got {self.param}")

    @property
    def mean(self) -> float:
        return self.param

    @property
    def variance(self) -> float:
        if self.kind is ArmKind.BERNOULLI:
            return self.param * (1.0 - self.param)
        if self.kind is ArmKind.GAUSSIAN_UNIT:
            return 1.0
        return 0.0

    @staticmethod
    def bernoulli(p: float) -> "ArmModel":
        return ArmModel(ArmKind.BERNOULLI, p)

    @staticmethod
    def gaussian_unit(mean: float) -> "ArmModel":
        return ArmModel(ArmKind.GAUSSIAN_UNIT, mean)

    @staticmethod
    def deterministic(value: float) -> "ArmModel":
        return ArmModel(ArmKind.DETERMINISTIC, value)

    @staticmethod
    def parse(spec: str) -> "ArmModel":
        """Parse an arm string such as "bern:0.25", "gauss:0.3" or "det:1"."""
        try:
            prefix, _, raw = spec.partition(":")
            value = float(raw)
        except ValueError as exc:
            raise ValueError(f"malformed arm spec {spec!r}") from exc
        if prefix == "bern":
            return ArmModel.bernoulli(value)
        if prefix == "gauss":
            return ArmModel.gaussian_unit(value)
        if prefix == "det":
            return ArmModel.deterministic(value)
        raise ValueError(f"unknown arm kind {prefix!r} in {spec!r}")


@dataclass(frozen=True)
class BanditInstance:
    """An ordered collection of arms plus derived gap structure.

    Attributes
    ----------
    arms : tuple of ArmModel
        At least two arms (single-arm problems are rejected because the
        runner-up maximization in the decision rules needs a second arm).
    """

    arms: tuple[ArmModel, ...]

    def __init__(self, arms) -> None:
        arms = tuple(arms)
        if len(arms) < 2:
            raise ValueError("an instance needs at least two arms")
        object.__setattr__(self, "arms", arms)

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def means(self) -> np.ndarray:
        return np.array([a.mean for a in self.arms], dtype=np.float64)

    @property
    def variances(self) -> np.ndarray:
        return np.array([a.variance for a in self.arms], dtype=np.float64)

    @property
    def mu_star(self) -> float:
        return float(self.means.max())

    @property
    def gaps(self) -> np.ndarray:
        return self.mu_star - self.means

    @property
    def optimal_set(self) -> tuple[int, ...]:
        return tuple(int(a) for a in np.flatnonzero(self.gaps == 0.0))

    @property
    def delta_min(self) -> float | None:
        """Smallest positive gap; None when every arm is optimal."""
        positive = self.gaps[self.gaps > 0.0]
        return float(positive.min()) if positive.size else None

    @property
    def delta_max(self) -> float:
        return float(self.gaps.max())

    @staticmethod
    def parse(arm_specs) -> "BanditInstance":
        return BanditInstance(ArmModel.parse(s) for s in arm_specs)


@dataclass
class RunState:
    """Mutable per-episode statistics.

    plays counts pulls, queries counts observed pulls; sums and sums_sq
    accumulate observed rewards and their squares. total_queries tracks
    the running query budget spent. Exactly one episode mutates a state
    at a time.
    """

    n_arms: int
    t: int = 0
    plays: np.ndarray = field(init=False)
    queries: np.ndarray = field(init=False)
    sums: np.ndarray = field(init=False)
    sums_sq: np.ndarray = field(init=False)
    total_queries: int = 0

    def __post_init__(self) -> None:
        self.plays = np.zeros(self.n_arms, dtype=np.int64)
        self.queries = np.zeros(self.n_arms, dtype=np.int64)
        self.sums = np.zeros(self.n_arms, dtype=np.float64)
        self.sums_sq = np.zeros(self.n_arms, dtype=np.float64)


def _check_arm(state: RunState, a: int) -> None:
    if not 0 <= a < state.n_arms:
        raise IndexError(f"arm index {a} out of range for {state.n_arms} arms")


def empirical_mean(state: RunState, a: int) -> float:
    """Mean of the observed rewards of arm a; 0 when nothing was observed."""
    _check_arm(state, a)
    n = state.queries[a]
    if n == 0:
        return 0.0
    return state.sums[a] / n


def empirical_variance(state: RunState, a: int) -> float:
    """Unbiased sample variance of arm a's observations.

    Returns 0 for fewer than two observations. The running-sums form
    (n/(n-1)) * (sum_sq/n - mean^2) is clamped at zero against
    floating-point cancellation on near-constant samples.
    """
    _check_arm(state, a)
    n = state.queries[a]
    if n < 2:
        return 0.0
    rhat = state.sums[a] / n
    v = (n / (n - 1.0)) * (state.sums_sq[a] / n - rhat * rhat)
    if v < 0.0:
        v = 0.0
    return v


def update(state: RunState, a: int, reward: float, queried: bool) -> RunState:
    """Advance one round: play arm a, observing the reward only if queried."""
    _check_arm(state, a)
    state.t += 1
    state.plays[a] += 1
    if queried:
        state.queries[a] += 1
        state.total_queries += 1
        state.sums[a] += reward
        state.sums_sq[a] += reward * reward
    return state
