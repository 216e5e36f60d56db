"""The four strategies as pure decision functions.

Each decide function maps (round, state, confidence rule, eps threshold)
to a Decision. They are only consulted after the forced initialization
rounds t = 1..K (play arm t, query); the simulator owns that phase.

Every argmax breaks ties toward the lowest arm index, so traces are
reproducible. Comparisons involving unqueried arms follow the extended
reals: +inf UCB beats any finite UCB, any finite LCB beats -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .confidence import ConfidenceRule
from .core import RunState, empirical_mean

BUFALU, BUFAU, CBM, GREEDY = "bufalu", "bufau", "cbm", "greedy"
POLICY_IDS = {BUFALU: 0, BUFAU: 1, CBM: 2, GREEDY: 3}
POLICY_NAMES = sorted(POLICY_IDS)


@dataclass(frozen=True)
class Decision:
    arm: int
    query: bool
    l_t: int | None = None
    u_t: int | None = None
    c_t: int | None = None
    separated: bool = False
    extras: dict = field(default_factory=dict)


def _all_bounds(state: RunState, rule: ConfidenceRule, t: int):
    lcb = [0.0] * state.n_arms
    ucb = [0.0] * state.n_arms
    for a in range(state.n_arms):
        lcb[a], ucb[a] = rule.bounds(state, a, t)
    return lcb, ucb


def _argmax(values, skip: int = -1) -> int:
    best = -1
    best_v = -math.inf
    for i, v in enumerate(values):
        if i == skip:
            continue
        if best < 0 or v > best_v:
            best, best_v = i, v
    return best


def bufalu_decide(t: int, state: RunState, rule: ConfidenceRule, eps: float) -> Decision:
    """LCB-leader vs widest challenger, with a width gate on querying.

    l_t leads on LCB, u_t on UCB among the others; c_t is whichever of
    the pair has the wider interval. Once the challenger cannot overturn
    l_t (separation) or the joint uncertainty is within eps, exploit l_t
    for free; otherwise play c_t and pay for the sample.
    """
    assert t > state.n_arms, "decide is only defined after initialization"
    lcb, ucb = _all_bounds(state, rule, t)
    l = _argmax(lcb)
    u = _argmax(ucb, skip=l)
    wu = ucb[u] - lcb[u]
    wl = ucb[l] - lcb[l]
    if wu > wl:
        c = u
    elif wl > wu:
        c = l
    else:
        c = min(u, l)
    separated = bool(ucb[u] <= lcb[l])
    if separated or ucb[c] - lcb[l] <= eps:
        return Decision(arm=l, query=False, l_t=l, u_t=u, c_t=c, separated=separated)
    return Decision(arm=c, query=True, l_t=l, u_t=u, c_t=c, separated=False)


def bufau_decide(t: int, state: RunState, rule: ConfidenceRule, eps: float) -> Decision:
    """Optimistic variant: the UCB leader itself is the query target.

    u_t maximizes UCB over all arms, while the separation gate compares
    the best UCB among arms other than l_t against LCB(l_t). Both values
    are reported since they can differ when u_t = l_t.
    """
    assert t > state.n_arms, "decide is only defined after initialization"
    lcb, ucb = _all_bounds(state, rule, t)
    l = _argmax(lcb)
    u = _argmax(ucb)
    rest = _argmax(ucb, skip=l)
    separated = bool(ucb[rest] <= lcb[l])
    if separated or ucb[u] - lcb[l] <= eps:
        return Decision(arm=l, query=False, l_t=l, u_t=u, separated=separated,
                        extras={"ucb_rest_max": ucb[rest], "ucb_global_max": ucb[u]})
    return Decision(arm=u, query=True, l_t=l, u_t=u, separated=False,
                    extras={"ucb_rest_max": ucb[rest], "ucb_global_max": ucb[u]})


def cbm_decide(t: int, state: RunState, rule: ConfidenceRule, eps: float) -> Decision:
    """Play the UCB leader; query while its own interval is wider than eps."""
    assert t > state.n_arms, "decide is only defined after initialization"
    lcb, ucb = _all_bounds(state, rule, t)
    u = _argmax(ucb)
    query = bool(ucb[u] - lcb[u] > eps)
    return Decision(arm=u, query=query, u_t=u)


def greedy_decide(t: int, state: RunState, rule: ConfidenceRule, eps: float) -> Decision:
    """Query up front, then switch to pure exploitation.

    The effective budget 6 K ln t / eps^2 + K is what a width-eps stopping
    rule would spend; past it the policy trusts the empirical means. At
    eps = 0 the budget is infinite and this is plain optimism.
    """
    assert t > state.n_arms, "decide is only defined after initialization"
    k = state.n_arms
    e2 = eps * eps  # can underflow to 0 for subnormal eps: treat as eps = 0
    if e2 > 0.0:
        lg = math.log(t)
        b_eff = 6.0 * k * lg / e2 + k
    else:
        b_eff = math.inf
    if state.total_queries > b_eff - 1.0:
        means = [empirical_mean(state, a) for a in range(k)]
        return Decision(arm=_argmax(means), query=False,
                        extras={"effective_budget": b_eff})
    lcb, ucb = _all_bounds(state, rule, t)
    u = _argmax(ucb)
    return Decision(arm=u, query=True, u_t=u, extras={"effective_budget": b_eff})


_DECIDERS = {BUFALU: bufalu_decide, BUFAU: bufau_decide, CBM: cbm_decide, GREEDY: greedy_decide}


def decider(policy: str):
    try:
        return _DECIDERS[policy]
    except KeyError:
        raise ValueError(f"unknown policy {policy!r}; expected one of {POLICY_NAMES}") from None
