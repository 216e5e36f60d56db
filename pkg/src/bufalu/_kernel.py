"""Compiled episode loop.

One numba kernel runs a full episode over a pregenerated reward tape.
It mirrors the pure-Python path (policies.py + simulator reference
engine) expression by expression: the float operation order in the
bound formulas is kept identical so the two engines agree bit for bit,
which the test suite asserts. Change one side only together with the
other.

Policy ids: 0 bufalu, 1 bufau, 2 cbm, 3 greedy.
Rule ids: 0 hoeffding, 1 bernstein.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def episode_kernel(policy_id, rule_id, tape, gaps, mus, eps, ckpt_ts, arm_cap):
    n_arms = tape.shape[0]
    horizon = tape.shape[1]
    plays = np.zeros(n_arms, dtype=np.int64)
    queries = np.zeros(n_arms, dtype=np.int64)
    sums = np.zeros(n_arms, dtype=np.float64)
    sumsq = np.zeros(n_arms, dtype=np.float64)
    lcb = np.empty(n_arms, dtype=np.float64)
    ucb = np.empty(n_arms, dtype=np.float64)
    means = np.empty(n_arms, dtype=np.float64)

    total_q = 0
    regret = 0.0
    viol_gate = 0  # queried although the arm's width was already <= eps
    viol_skip = 0  # skipped the query on the good event with gap > eps
    viol_cap = 0   # per-arm query count exceeded the almost-sure cap

    n_ckpt = ckpt_ts.shape[0]
    ck_regret = np.zeros(n_ckpt, dtype=np.float64)
    ck_queries = np.zeros(n_ckpt, dtype=np.int64)
    ck_arm_queries = np.zeros((n_ckpt, n_arms), dtype=np.int64)
    ptr = 0

    for t in range(1, horizon + 1):
        if t <= n_arms:
            a = t - 1
            q = True
        else:
            e = eps[t - 1]
            lg = math.log(t)
            for j in range(n_arms):
                n = queries[j]
                if rule_id == 0:
                    if n == 0:
                        lcb[j] = -np.inf
                        ucb[j] = np.inf
                    else:
                        nf = float(n)
                        rhat = sums[j] / nf
                        w = math.sqrt(3.0 * lg / (2.0 * nf))
                        lcb[j] = rhat - w
                        ucb[j] = rhat + w
                else:
                    if n <= 1:
                        lcb[j] = -np.inf
                        ucb[j] = np.inf
                    else:
                        nf = float(n)
                        rhat = sums[j] / nf
                        v = (nf / (nf - 1.0)) * (sumsq[j] / nf - rhat * rhat)
                        if v < 0.0:
                            v = 0.0
                        w = math.sqrt(6.0 * v * lg / nf) + 7.0 * lg / (nf - 1.0)
                        lcb[j] = rhat - w
                        ucb[j] = rhat + w

            if policy_id == 0:
                # lcb leader, ucb leader among the rest, widest of the pair
                l = -1
                bv = -np.inf
                for j in range(n_arms):
                    if l < 0 or lcb[j] > bv:
                        l = j
                        bv = lcb[j]
                u = -1
                bv = -np.inf
                for j in range(n_arms):
                    if j == l:
                        continue
                    if u < 0 or ucb[j] > bv:
                        u = j
                        bv = ucb[j]
                wu = ucb[u] - lcb[u]
                wl = ucb[l] - lcb[l]
                if wu > wl:
                    c = u
                elif wl > wu:
                    c = l
                else:
                    c = u if u < l else l
                if ucb[u] <= lcb[l] or ucb[c] - lcb[l] <= e:
                    a = l
                    q = False
                else:
                    a = c
                    q = True
            elif policy_id == 1:
                l = -1
                bv = -np.inf
                for j in range(n_arms):
                    if l < 0 or lcb[j] > bv:
                        l = j
                        bv = lcb[j]
                u = -1
                bv = -np.inf
                for j in range(n_arms):
                    if u < 0 or ucb[j] > bv:
                        u = j
                        bv = ucb[j]
                rest = -1
                bv = -np.inf
                for j in range(n_arms):
                    if j == l:
                        continue
                    if rest < 0 or ucb[j] > bv:
                        rest = j
                        bv = ucb[j]
                if ucb[rest] <= lcb[l] or ucb[u] - lcb[l] <= e:
                    a = l
                    q = False
                else:
                    a = u
                    q = True
            elif policy_id == 2:
                u = -1
                bv = -np.inf
                for j in range(n_arms):
                    if u < 0 or ucb[j] > bv:
                        u = j
                        bv = ucb[j]
                a = u
                q = ucb[u] - lcb[u] > e
            else:
                e2 = e * e  # can underflow to 0 for subnormal eps: treat as eps = 0
                if e2 > 0.0:
                    b_eff = 6.0 * n_arms * lg / e2 + n_arms
                else:
                    b_eff = np.inf
                if total_q > b_eff - 1.0:
                    for j in range(n_arms):
                        n = queries[j]
                        if n == 0:
                            means[j] = 0.0
                        else:
                            means[j] = sums[j] / float(n)
                    a = -1
                    bv = -np.inf
                    for j in range(n_arms):
                        if a < 0 or means[j] > bv:
                            a = j
                            bv = means[j]
                    q = False
                else:
                    u = -1
                    bv = -np.inf
                    for j in range(n_arms):
                        if u < 0 or ucb[j] > bv:
                            u = j
                            bv = ucb[j]
                    a = u
                    q = True

            if q:
                if not (ucb[a] - lcb[a] > e):
                    viol_gate += 1
            else:
                good = True
                for j in range(n_arms):
                    if mus[j] < lcb[j] or mus[j] > ucb[j]:
                        good = False
                        break
                if good and gaps[a] > e:
                    viol_skip += 1

        r = tape[a, plays[a]]
        plays[a] += 1
        if q:
            queries[a] += 1
            total_q += 1
            sums[a] += r
            sumsq[a] += r * r
            if float(queries[a]) > arm_cap:
                viol_cap += 1
        regret += gaps[a]

        if ptr < n_ckpt and t == ckpt_ts[ptr]:
            ck_regret[ptr] = regret
            ck_queries[ptr] = total_q
            for j in range(n_arms):
                ck_arm_queries[ptr, j] = queries[j]
            ptr += 1

    return (ck_regret, ck_queries, ck_arm_queries, plays, queries,
            regret, total_q, viol_gate, viol_skip, viol_cap)
