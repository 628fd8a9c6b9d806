"""Compiled event loop for the bucket-fill phase of the SAB model.

One shared UDA accepts one operation per cycle.  ``S`` BAMs each own a
subset of the windows and stream ``m`` (digit, point) pairs per window;
the issue grant passes round-robin across BAMs.  Idle slots go to the IS-RBAM,
which drains the per-window reduction work in completion order.
"""
from __future__ import annotations

import numpy as np
from numba import njit

STALL = 0
DEFER = 1

_NEVER = -(1 << 60)


@njit(inline="always")
def _next_rand(state):
    # xorshift64*
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return (x * np.uint64(0x2545F4914F6CDD1D)) >> np.uint64(32)


@njit(cache=True)
def run_fill(S, p, m, k, top_bits, L, policy, qcap, seed, hazard_free,
             pairs_per_cycle, rbam_ops, digits, sticky, record):
    """Returns (fill_end, rbam_last, window_done, stalls, replays,
    fill_uda_ops, trace).

    ``fill_end`` is one past the last fill issue cycle.  ``rbam_last[w]`` is
    the cycle of the last IS-RBAM slot operation for window ``w``;
    ``window_done[w]`` the cycle of its last bucket-fill issue.
    ``digits`` is either an empty (0, 0) array or an explicit ``(p, m)``
    digit matrix that replaces the generator.  With ``sticky`` the BAM that
    issued keeps priority until it hits a hazard; otherwise the grant moves
    on every cycle.  ``record`` fills ``trace`` with one
    ``(cycle, bam, window, bucket)`` row per bucket-fill issue.
    """
    use_digits = digits.shape[0] > 0
    state = np.empty(1, np.uint64)
    state[0] = np.uint64(seed) * np.uint64(0x9E3779B97F4A7C15) + np.uint64(0x632BE59BD9B4E019)
    if state[0] == 0:
        state[0] = np.uint64(1)

    nb = 1 << k
    last_t = np.full((S, nb), _NEVER, np.int64)
    last_w = np.full((S, nb), -1, np.int64)

    # window schedule: BAM b owns windows b, b + S, ...
    n_own = np.zeros(S, np.int64)
    for w in range(p):
        n_own[w % S] += 1
    cur = np.zeros(S, np.int64)          # index into own windows
    left = np.full(S, m, np.int64)       # pairs still to draw in current window
    head = np.full(S, -1, np.int64)      # drawn but not issued digit
    qd = np.zeros((S, qcap), np.int64)   # deferred digits
    qn = np.zeros(S, np.int64)
    wlast = np.full(p, -1, np.int64)
    active = 0
    for b in range(S):
        if n_own[b] > 0:
            active += 1

    rbam_last = np.full(p, -1, np.int64)
    rbam_left = np.full(p, rbam_ops, np.int64)
    order = np.zeros(p, np.int64)        # windows in completion order
    n_done = 0
    rq = 0                               # IS-RBAM queue head

    credit = 1.0
    cap = max(1.0, 2.0 * S)
    unlimited = pairs_per_cycle >= 1.0 * S

    trace = np.zeros((p * m if record else 0, 4), np.int64)
    n_tr = 0

    t = 0
    rr = 0
    stalls = 0
    replays = 0
    fill_uda = 0
    fill_end = 0

    while active > 0:
        issued = False
        wake = 1 << 62
        for o in range(S):
            b = rr + o
            if b >= S:
                b -= S
            if cur[b] >= n_own[b]:
                continue
            w = b + S * cur[b]
            bits = top_bits if w == p - 1 else k
            # replay a deferred pair whose bucket has drained
            if policy == DEFER:
                for qi in range(qn[b]):
                    d = qd[b, qi]
                    ready = last_t[b, d] + L
                    if last_w[b, d] != w or ready <= t:
                        last_t[b, d] = t
                        last_w[b, d] = w
                        for qj in range(qi, qn[b] - 1):
                            qd[b, qj] = qd[b, qj + 1]
                        qn[b] -= 1
                        replays += 1
                        fill_uda += 1
                        issued = True
                        break
                    if ready < wake:
                        wake = ready
                if issued:
                    if record:
                        trace[n_tr, 0] = t
                        trace[n_tr, 1] = b
                        trace[n_tr, 2] = w
                        trace[n_tr, 3] = d
                        n_tr += 1
                    wlast[w] = t
                    rr = b if sticky else b + 1
                    break
            while True:
                if head[b] < 0:
                    if left[b] == 0:
                        break
                    if not unlimited and credit < 1.0:
                        need = t + int(np.ceil((1.0 - credit) / pairs_per_cycle))
                        if need < wake:
                            wake = need
                        break
                    if not unlimited:
                        credit -= 1.0
                    i = m - left[b]
                    left[b] -= 1
                    if use_digits:
                        head[b] = digits[w, i]
                    elif hazard_free:
                        head[b] = 1 + (i % ((1 << bits) - 1))
                    else:
                        head[b] = np.int64(_next_rand(state) & np.uint64((1 << bits) - 1))
                d = head[b]
                if record:
                    trace[n_tr, 0] = t
                    trace[n_tr, 1] = b
                    trace[n_tr, 2] = w
                    trace[n_tr, 3] = d
                if d == 0:
                    head[b] = -1
                    n_tr += record
                    issued = True
                    break
                ready = last_t[b, d] + L
                if last_w[b, d] != w or ready <= t:
                    last_t[b, d] = t
                    last_w[b, d] = w
                    head[b] = -1
                    n_tr += record
                    fill_uda += 1
                    issued = True
                    break
                if policy == DEFER and qn[b] < qcap:
                    qd[b, qn[b]] = d
                    qn[b] += 1
                    head[b] = -1
                    if ready < wake:
                        wake = ready
                    continue
                if ready < wake:
                    wake = ready
                break
            if issued:
                wlast[w] = t
                rr = b if sticky else b + 1
                break

        # close windows whose pairs are all issued
        for b in range(S):
            if cur[b] < n_own[b] and left[b] == 0 and head[b] < 0 and qn[b] == 0:
                w = b + S * cur[b]
                if wlast[w] < 0:
                    wlast[w] = t
                order[n_done] = w
                n_done += 1
                cur[b] += 1
                left[b] = m
                if cur[b] >= n_own[b]:
                    active -= 1

        if rr >= S:
            rr = 0
        if issued:
            fill_end = t + 1
            t += 1
            if not unlimited:
                credit = min(cap, credit + pairs_per_cycle)
            continue
        if active == 0:
            break

        # nobody could issue: hand idle cycles to the IS-RBAM until ``wake``
        if wake <= t:
            wake = t + 1
        stalls += wake - t
        t0 = t
        while t < wake and rq < n_done:
            w = order[rq]
            ready = wlast[w] + L
            if ready >= wake:
                break
            if ready > t:
                t = ready
            n = min(rbam_left[w], wake - t)
            rbam_left[w] -= n
            t += n
            if rbam_left[w] == 0:
                rbam_last[w] = t - 1
                rq += 1
        if not unlimited:
            credit = min(cap, credit + pairs_per_cycle * (wake - t0))
        t = wake

    # tail: remaining reduction work after the last fill issue
    t = fill_end
    while rq < n_done:
        w = order[rq]
        ready = wlast[w] + L
        if ready > t:
            t = ready
        t += rbam_left[w]
        rbam_left[w] = 0
        rbam_last[w] = t - 1
        rq += 1
    return fill_end, rbam_last, wlast, stalls, replays, fill_uda, trace
