"""Pure-Python enumeration kernels.

Fallback for the compiled ``_core`` extension and the only path for tables
whose exact integer values do not fit in 64 bits. Every function here has
the same signature and the same tie-breaking as its compiled twin; the
wrapper in :mod:`subsearch.kernels` decides which one runs.

Tables are indexed by subset bitmask. Values are Python ints (exactly
scaled rationals) or floats; ``tol`` is 0 for ints.
"""
from __future__ import annotations

import numpy as np


def check_structure(T, n, tol):
    """Exhaustive structure scan of a set-function table.

    Returns ``(normalized, mono, sub, sup)`` where ``mono`` is the first
    ``(A, s)`` with ``T[A+s] < T[A]`` and ``sub``/``sup`` are the first
    ``(A, s, t)`` (``s < t``) violating diminishing/increasing marginals.
    "First" is lexicographic in ``(A, s, t)``; ``None`` means no violation.
    """
    arr = np.asarray(T, dtype=object if not isinstance(T, np.ndarray) else T.dtype)
    idx = np.arange(1 << n, dtype=np.int64)
    normalized = abs(arr[0]) <= tol
    mono = None
    for s in range(n):
        bs = 1 << s
        A = idx[(idx & bs) == 0]
        bad = A[arr[A | bs] < arr[A] - tol]
        if bad.size and (mono is None or (int(bad[0]), s) < mono):
            mono = (int(bad[0]), s)
    sub = sup = None
    for s in range(n):
        bs = 1 << s
        for t in range(s + 1, n):
            bt = 1 << t
            A = idx[(idx & (bs | bt)) == 0]
            lhs = arr[A | bs] + arr[A | bt]
            rhs = arr[A | bs | bt] + arr[A]
            bad = A[lhs < rhs - tol]
            if bad.size and (sub is None or (int(bad[0]), s, t) < sub):
                sub = (int(bad[0]), s, t)
            bad = A[lhs > rhs + tol]
            if bad.size and (sup is None or (int(bad[0]), s, t) < sup):
                sup = (int(bad[0]), s, t)
    return bool(normalized), mono, sub, sup


def _submasks(cand):
    sub = cand
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & cand


def argmax_union(H, cand, tol):
    """Max of ``H`` over submasks of ``cand`` and the union of all maximizers."""
    best = None
    for sub in _submasks(cand):
        v = H[sub]
        if best is None or v > best:
            best = v
    union = 0
    for sub in _submasks(cand):
        if H[sub] >= best - tol:
            union |= sub
    return best, union


def min_connectivity(H, n, tol):
    """Minimize ``H[B] + H[~B] - H[S]`` over proper nonempty ``B``.

    Among minimizers the smallest cardinality wins, then the smallest mask.
    """
    full = (1 << n) - 1
    if n < 2:
        return None, 0
    hs = H[full]
    best = None
    for B in range(1, full):
        d = H[B] + H[full ^ B] - hs
        if best is None or d < best:
            best = d
    pick, pick_key = 0, None
    for B in range(1, full):
        if H[B] + H[full ^ B] - hs <= best + tol:
            key = (bin(B).count("1"), B)
            if pick_key is None or key < pick_key:
                pick, pick_key = B, key
    return best, pick


def suffix_dp(G, F, n):
    """Optimal cost-to-go over searched prefixes.

    ``R[A]`` is the minimum of ``sum (G[P+s]-G[P]) * F[P+s]`` over all ways
    of appending the elements outside ``A``. ``R[0]`` is the optimum.
    """
    full = (1 << n) - 1
    R = [0] * (full + 1)
    for A in range(full - 1, -1, -1):
        gA = G[A]
        best = None
        rest = full ^ A
        while rest:
            low = rest & -rest
            rest ^= low
            B = A | low
            v = (G[B] - gA) * F[B] + R[B]
            if best is None or v < best:
                best = v
        R[A] = best
    return R


def permutation_costs(G, F, n):
    """Search cost of every permutation, listed in lexicographic order."""
    out = []
    used = [False] * n

    def rec(depth, A, acc):
        if depth == n:
            out.append(acc)
            return
        gA = G[A]
        for s in range(n):
            if not used[s]:
                used[s] = True
                B = A | (1 << s)
                rec(depth + 1, B, acc + (G[B] - gA) * F[B])
                used[s] = False

    rec(0, 0, 0)
    return out


def fictitious_play(M, iters, tol, check_every):
    """Alternating fictitious play on a cost matrix (row player minimizes).

    The Hider moves first each round and the Searcher answers the updated
    mixture. Returns ``(row_counts, col_counts, rounds, lower, upper)``
    where the bounds are best responses to the empirical mixtures.
    """
    M = np.asarray(M, dtype=np.float64)
    R, C = M.shape
    row_counts = np.zeros(R, dtype=np.int64)
    col_counts = np.zeros(C, dtype=np.int64)
    row_payoff = np.zeros(R)  # sum of M[:, j] over hider plays
    col_payoff = np.zeros(C)  # sum of M[i, :] over searcher plays
    i, j = 0, 0
    t = 0
    while t < iters:
        col_counts[j] += 1
        row_payoff += M[:, j]
        i = int(np.argmin(row_payoff))
        row_counts[i] += 1
        col_payoff += M[i, :]
        j = int(np.argmax(col_payoff))
        t += 1
        if t % check_every == 0 or t == iters:
            if float(col_payoff[j] - row_payoff[i]) / t <= tol:
                break
    lower = float(row_payoff.min()) / t
    upper = float(col_payoff.max()) / t
    return row_counts, col_counts, t, lower, upper
