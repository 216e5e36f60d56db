"""Round-indexed width thresholds eps(t) and the derived quantities.

A schedule gates querying: policies stop paying for feedback once
interval widths fall under eps(t). Budget-derived schedules translate a
query budget B(t) into the width threshold that spends roughly that
budget. l_epsilon and n_bar are the two schedule-dependent quantities
the regret/query bound predictions are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .confidence import ConfidenceRule

BudgetFn = Callable[[int], float]


def _checked_positive(name: str, value: float, floor: float) -> float:
    if value <= floor:
        raise ValueError(f"{name} schedule needs budget > {floor}, got {value}")
    return value


@dataclass(frozen=True)
class EpsilonSchedule:
    """eps(t) for t >= first_t; kinds cover the experiment profiles.

    power(alpha): t^-alpha. zero: constantly 0. inv_log: 1/ln t, defined
    from t = 2 (sums over full horizons substitute eps(2) at t = 1).
    budget_hoeffding / budget_bernstein: derived from a TOTAL budget map
    (divided by K internally). fixed_budget: constant total budget B.
    """

    kind: str
    alpha: float = 0.0
    budget: BudgetFn | None = None
    n_arms: int = 0
    fixed: float = 0.0
    label: str = field(default="", compare=False)

    @property
    def first_t(self) -> int:
        return 2 if self.kind == "inv_log" else 1

    def __call__(self, t: int) -> float:
        return self.eval(t)

    def eval(self, t: int) -> float:
        k = self.kind
        if k == "power":
            return t ** (-self.alpha)
        if k == "zero":
            return 0.0
        if k == "inv_log":
            if t <= 1:
                raise ValueError("inv_log schedule is undefined for t <= 1")
            return 1.0 / math.log(t)
        lg = math.log(t)
        if k == "budget_hoeffding":
            b = _checked_positive("budget_hoeffding", self.budget(t), 0.0)
            return math.sqrt(6.0 * self.n_arms * lg / b)
        if k == "budget_bernstein":
            # per-arm budget must exceed 1 for the 1/(b-1) terms
            b = _checked_positive("budget_bernstein", self.budget(t) / self.n_arms, 1.0)
            return math.sqrt(6.0 * lg / (b - 1.0)) + 14.0 * lg / (b - 1.0)
        if k == "fixed_budget":
            return math.sqrt(6.0 * self.n_arms * lg / self.fixed)
        raise AssertionError(f"unreachable schedule kind {k!r}")

    def eval_total(self, t: int) -> float:
        """eval with the t=1 completion for schedules that start at t=2."""
        if t < self.first_t:
            return self.eval(self.first_t)
        return self.eval(t)

    @property
    def nonincreasing_hint(self) -> bool:
        """True for kinds that are nonincreasing on their domain by construction."""
        if self.kind in ("power", "zero", "inv_log"):
            return True
        if self.kind == "fixed_budget":
            return False  # sqrt(ln t) grows
        return False

    # -- parsing ----------------------------------------------------------

    @staticmethod
    def power(alpha: float) -> "EpsilonSchedule":
        if alpha < 0.0:
            raise ValueError(f"power schedule needs alpha >= 0, got {alpha}")
        return EpsilonSchedule(kind="power", alpha=alpha, label=f"power:{alpha:g}")

    @staticmethod
    def zero() -> "EpsilonSchedule":
        return EpsilonSchedule(kind="zero", label="zero")

    @staticmethod
    def inv_log() -> "EpsilonSchedule":
        return EpsilonSchedule(kind="inv_log", label="invlog")

    @staticmethod
    def from_budget_hoeffding(budget: BudgetFn, n_arms: int) -> "EpsilonSchedule":
        return EpsilonSchedule(kind="budget_hoeffding", budget=budget, n_arms=n_arms,
                               label="budget-hoeffding")

    @staticmethod
    def from_budget_bernstein(budget: BudgetFn, n_arms: int) -> "EpsilonSchedule":
        return EpsilonSchedule(kind="budget_bernstein", budget=budget, n_arms=n_arms,
                               label="budget-bernstein")

    @staticmethod
    def fixed_budget(b: float, n_arms: int) -> "EpsilonSchedule":
        if b <= 0.0:
            raise ValueError(f"fixed budget must be positive, got {b}")
        return EpsilonSchedule(kind="fixed_budget", fixed=b, n_arms=n_arms,
                               label=f"fixed:{b:g}")

    @staticmethod
    def parse(spec: str, n_arms: int) -> "EpsilonSchedule":
        """Config-file names: "power:0.25", "zero", "invlog", "fixed:<B>",
        "budget-hoeffding:<B>", "budget-bernstein:<B>" (constant total B)."""
        head, _, arg = spec.partition(":")
        if head == "power":
            return EpsilonSchedule.power(float(arg))
        if head == "zero":
            return EpsilonSchedule.zero()
        if head == "invlog":
            return EpsilonSchedule.inv_log()
        if head == "fixed":
            return EpsilonSchedule.fixed_budget(float(arg), n_arms)
        if head in ("budget-hoeffding", "budget-bernstein"):
            if not arg:
                raise ValueError(f"{head} needs a constant total budget, e.g. {head}:2000")
            b = float(arg)
            make = (EpsilonSchedule.from_budget_hoeffding if head == "budget-hoeffding"
                    else EpsilonSchedule.from_budget_bernstein)
            return make(lambda t, _b=b: _b, n_arms)
        raise ValueError(f"unknown schedule spec {spec!r}")

    @property
    def budget_derived(self) -> bool:
        return self.kind in ("budget_hoeffding", "budget_bernstein", "fixed_budget")

    def total_budget(self, t: int) -> float:
        """B(t) for budget-derived kinds; the compliance cap is B(T) + K."""
        if self.kind == "fixed_budget":
            return self.fixed
        if self.kind in ("budget_hoeffding", "budget_bernstein"):
            return self.budget(t)
        raise ValueError(f"{self.kind} schedule carries no budget")


def epsilon_inverse(schedule: EpsilonSchedule, delta: float, t_max: int) -> int:
    """sup{t <= t_max : eps(t) >= delta} for nonincreasing schedules, else t_max.

    Returns 0 when even eps(first_t) < delta.
    """
    if not schedule.nonincreasing_hint:
        return t_max
    lo = schedule.first_t
    if schedule.eval(lo) < delta:
        return 0
    hi = t_max
    if schedule.eval(hi) >= delta:
        return t_max
    # invariant: eps(lo) >= delta > eps(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if schedule.eval(mid) >= delta:
            lo = mid
        else:
            hi = mid
    return lo


def l_epsilon(schedule: EpsilonSchedule, horizon: int, delta: float) -> int:
    """Exact count of rounds t in [1, horizon] with eps(t) >= delta.

    Rounds below the schedule's first defined index use the completion
    eps(first_t). For nonincreasing schedules the count is cross-checked
    against the closed-form inverse sup{t : eps(t) >= delta}.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if delta < 0.0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    count = 0
    for t in range(1, horizon + 1):
        if schedule.eval_total(t) >= delta:
            count += 1
    if schedule.nonincreasing_hint and delta > 0.0:
        cap = epsilon_inverse(schedule, delta, horizon)
        # the t=1 completion only counts when the first defined round does,
        # so the inverse still caps the exact sum
        assert count <= max(cap, 0), (count, cap, schedule.label)
    return count


def eps_array(schedule: EpsilonSchedule, horizon: int) -> "list[float]":
    """[eps(1), ..., eps(horizon)] with the first_t completion, 0-indexed by t-1."""
    return [schedule.eval_total(t) for t in range(1, horizon + 1)]


def n_bar(schedule: EpsilonSchedule, horizon: int, delta: float,
          rule: ConfidenceRule, variance: float | None = None) -> float:
    """max over t in [1, horizon] of n_good(t, max(delta, eps(t))).

    The exact scan is the definition and handles arbitrary schedules.
    For nonincreasing schedules the maximum must sit at t = horizon, and
    that closed form is asserted against the scan.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    best = 0.0
    for t in range(1, horizon + 1):
        m = max(delta, schedule.eval_total(t))
        g = rule.n_good(t, m, variance)
        if g > best:
            best = g
    if schedule.nonincreasing_hint:
        closed = rule.n_good(horizon, max(delta, schedule.eval_total(horizon)), variance)
        assert best == closed, (best, closed, schedule.label, delta)
    return best


def n_bar_as(schedule: EpsilonSchedule, horizon: int,
             rule: ConfidenceRule) -> float:
    """max over t of n_as(t, eps(t)): the almost-sure per-arm query cap."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    best = 0.0
    for t in range(1, horizon + 1):
        g = rule.n_as(t, schedule.eval_total(t))
        if g > best:
            best = g
    return best
