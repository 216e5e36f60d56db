"""Decision functions: a frozen two-arm walkthrough plus gate/tie cases."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bufalu import (BERNSTEIN, HOEFFDING, POLICY_IDS, POLICY_NAMES, RunState,
                    bufalu_decide, bufau_decide, cbm_decide, decider,
                    greedy_decide, update)

# Frozen by hand: sqrt(3 ln 3 / 2), 1 + that, and 12 ln 3 / 3^(-1/2) + 2.
W_ONE_OBS_AT_3 = 1.2837127533066595
UCB_ONE_OBS_AT_3 = 2.2837127533066592
GREEDY_BUDGET_T3_K2 = 24.834227621512305


def _walkthrough_state() -> RunState:
    """Two arms after initialization: arm 0 observed 0, arm 1 observed 1."""
    s = RunState(2)
    update(s, 0, 0.0, True)
    update(s, 1, 1.0, True)
    return s


def _filled(n_per_arm, means, t_override=None) -> RunState:
    s = RunState(len(means))
    for a, (n, m) in enumerate(zip(n_per_arm, means)):
        s.plays[a] = n
        s.queries[a] = n
        s.sums[a] = n * m
        s.sums_sq[a] = n * m * m
    s.t = t_override if t_override is not None else int(sum(n_per_arm))
    s.total_queries = int(sum(n_per_arm))
    return s


def test_walkthrough_round_three():
    s = _walkthrough_state()
    eps = 3.0 ** -0.25
    assert HOEFFDING.ucb(s, 1, 3) == pytest.approx(UCB_ONE_OBS_AT_3, abs=1e-15)

    d = bufalu_decide(3, s, HOEFFDING, eps)
    # arm 1 leads on LCB; arm 0 is the best challenger; equal widths break
    # toward the lower index, and the joint width still exceeds eps
    assert (d.arm, d.query) == (0, True)
    assert (d.l_t, d.u_t, d.c_t, d.separated) == (1, 0, 0, False)

    d = bufau_decide(3, s, HOEFFDING, eps)
    assert (d.arm, d.query) == (1, True)
    assert d.l_t == 1 and d.u_t == 1
    assert d.extras["ucb_global_max"] == pytest.approx(UCB_ONE_OBS_AT_3, abs=1e-15)
    assert d.extras["ucb_rest_max"] == pytest.approx(W_ONE_OBS_AT_3, abs=1e-15)

    d = cbm_decide(3, s, HOEFFDING, eps)
    assert (d.arm, d.query) == (1, True)

    d = greedy_decide(3, s, HOEFFDING, eps)
    assert (d.arm, d.query) == (1, True)
    assert d.extras["effective_budget"] == pytest.approx(GREEDY_BUDGET_T3_K2, abs=1e-12)


def test_separation_stops_querying():
    # 50 samples each at means 0.9 / 0.1, t = 100: UCB(1) < LCB(0)
    s = _filled([50, 50], [0.9, 0.1])
    assert HOEFFDING.ucb(s, 1, 100) < HOEFFDING.lcb(s, 0, 100)
    d = bufalu_decide(100, s, HOEFFDING, 0.0)
    assert (d.arm, d.query, d.separated) == (0, False, True)
    d = bufau_decide(100, s, HOEFFDING, 0.0)
    assert (d.arm, d.query, d.separated) == (0, False, True)
    # cbm has no separation gate: it keeps paying while its own interval
    # is wider than eps
    d = cbm_decide(100, s, HOEFFDING, 0.0)
    assert (d.arm, d.query) == (0, True)
    d = cbm_decide(100, s, HOEFFDING, 1.0)
    assert (d.arm, d.query) == (0, False)


def test_width_gate_without_separation():
    # overlapping arms, joint width 2w = 0.455..
    s = _filled([200, 200], [0.55, 0.45], t_override=1000)
    w = math.sqrt(3.0 * math.log(1000) / 400.0)
    assert not HOEFFDING.ucb(s, 1, 1000) <= HOEFFDING.lcb(s, 0, 1000)
    d = bufalu_decide(1000, s, HOEFFDING, 2 * w + 1e-12)
    assert (d.arm, d.query, d.separated) == (0, False, False)
    d = bufalu_decide(1000, s, HOEFFDING, 2 * w - 1e-12)
    assert (d.arm, d.query) == (0, True)


def test_challenger_is_the_wider_interval():
    # arm 1 has a quarter of the samples, hence the wider interval
    s = _filled([200, 50], [0.55, 0.45], t_override=1000)
    d = bufalu_decide(1000, s, HOEFFDING, 0.1)
    assert (d.l_t, d.u_t, d.c_t) == (0, 1, 1)
    assert (d.arm, d.query) == (1, True)


def test_bufau_gates_on_rest_but_plays_global_leader():
    # arm 0 holds both the best LCB and the best UCB; the rest-max gate
    # would pass at eps = 0.5 but the global-max gate does not
    s = _filled([50, 500], [0.9, 0.5], t_override=100)
    rest_gap = HOEFFDING.ucb(s, 1, 100) - HOEFFDING.lcb(s, 0, 100)
    global_gap = HOEFFDING.ucb(s, 0, 100) - HOEFFDING.lcb(s, 0, 100)
    assert rest_gap < 0.5 < global_gap
    d = bufau_decide(100, s, HOEFFDING, 0.5)
    assert (d.arm, d.query) == (0, True)
    assert d.l_t == 0 and d.u_t == 0
    d = bufau_decide(100, s, HOEFFDING, global_gap + 1e-9)
    assert (d.arm, d.query) == (0, False)
    # same state under the challenger rule: the pair is (l=0, u=1) and the
    # leader's own interval is the wider one
    d = bufalu_decide(100, s, HOEFFDING, 0.5)
    assert (d.l_t, d.u_t, d.c_t) == (0, 1, 0)
    assert (d.arm, d.query) == (0, True)


def test_ties_break_to_lowest_index():
    s = _filled([30, 30, 30], [0.5, 0.5, 0.5], t_override=200)
    d = bufalu_decide(200, s, HOEFFDING, 0.0)
    assert (d.l_t, d.u_t, d.c_t) == (0, 1, 0)
    assert d.arm == 0
    assert cbm_decide(200, s, HOEFFDING, 0.0).arm == 0
    assert bufau_decide(200, s, HOEFFDING, 0.0).u_t == 0


def test_infinite_intervals_force_query():
    # Bernstein with one sample per arm: every interval is (-inf, +inf);
    # comparisons stay well-defined and the tie chain picks arm 0, queried
    s = _walkthrough_state()
    d = bufalu_decide(3, s, BERNSTEIN, 10.0)
    assert (d.arm, d.query) == (0, True)
    assert (d.l_t, d.u_t, d.c_t) == (0, 1, 0)
    d = bufau_decide(3, s, BERNSTEIN, 10.0)
    assert (d.arm, d.query) == (0, True)
    d = cbm_decide(3, s, BERNSTEIN, 10.0)
    assert (d.arm, d.query) == (0, True)


def test_unqueried_arm_dominates_ucb():
    s = _walkthrough_state()
    update(s, 0, 0.4, True)  # arm 0: two observations
    s2 = RunState(2)
    s2.t = s.t
    s2.plays[:] = s.plays
    s2.queries[0] = s.queries[0]
    s2.sums[0] = s.sums[0]
    s2.sums_sq[0] = s.sums_sq[0]
    # arm 1 played but never queried: UCB = +inf, so it is the challenger
    d = bufalu_decide(4, s2, HOEFFDING, 5.0)
    assert (d.arm, d.query, d.u_t) == (1, True, 1)
    assert cbm_decide(4, s2, HOEFFDING, 5.0).arm == 1


def test_greedy_budget_switch():
    # eps = 1, K = 2, t = 100: B_eff = 12 ln 100 + 2 = 57.26..
    s = _filled([30, 27], [0.2, 0.8], t_override=100)
    s.total_queries = 57
    b_eff = 12.0 * math.log(100.0) + 2.0
    assert s.total_queries > b_eff - 1.0
    d = greedy_decide(100, s, HOEFFDING, 1.0)
    assert (d.arm, d.query) == (1, False)
    assert d.extras["effective_budget"] == pytest.approx(b_eff, rel=1e-12)
    s.total_queries = 50  # under budget: optimistic and paying
    d = greedy_decide(100, s, HOEFFDING, 1.0)
    assert d.query


def test_greedy_zero_eps_never_stops_querying():
    s = _filled([500, 500], [0.2, 0.8], t_override=10**6)
    s.total_queries = 10**6
    d = greedy_decide(10**6, s, HOEFFDING, 0.0)
    assert d.query
    assert d.extras["effective_budget"] == math.inf


def test_greedy_exploits_empirical_mean_not_ucb():
    # arm 0: higher UCB through a huge interval; arm 1: higher mean
    s = _filled([2, 400], [0.5, 0.6], t_override=500)
    s.total_queries = 10**9
    assert HOEFFDING.ucb(s, 0, 500) > HOEFFDING.ucb(s, 1, 500)
    d = greedy_decide(500, s, HOEFFDING, 1.0)
    assert (d.arm, d.query) == (1, False)


def test_decide_requires_initialization():
    s = RunState(3)
    s.t = 2
    for fn in (bufalu_decide, bufau_decide, cbm_decide, greedy_decide):
        with pytest.raises(AssertionError):
            fn(2, s, HOEFFDING, 0.5)


def test_registry():
    assert POLICY_NAMES == ["bufalu", "bufau", "cbm", "greedy"]
    assert POLICY_IDS == {"bufalu": 0, "bufau": 1, "cbm": 2, "greedy": 3}
    assert decider("bufalu") is bufalu_decide
    assert decider("greedy") is greedy_decide
    with pytest.raises(ValueError):
        decider("ucb1")


@given(st.integers(2, 5),
       st.lists(st.tuples(st.integers(1, 40), st.floats(0, 1)), min_size=2, max_size=5),
       st.floats(0, 2), st.sampled_from(["bufalu", "bufau", "cbm", "greedy"]),
       st.sampled_from([HOEFFDING, BERNSTEIN]))
@settings(max_examples=200, deadline=None)
def test_decisions_are_pure_and_in_range(k, stats, eps, policy, rule):
    stats = stats[:k] + [(1, 0.5)] * max(0, k - len(stats))
    s = _filled([n for n, _ in stats], [m for _, m in stats])
    t = s.t + 1 if s.t >= k else k + 1
    s.t = t - 1
    d1 = decider(policy)(t, s, rule, eps)
    d2 = decider(policy)(t, s, rule, eps)
    assert (d1.arm, d1.query) == (d2.arm, d2.query)
    assert 0 <= d1.arm < k
    assert isinstance(d1.query, bool)
