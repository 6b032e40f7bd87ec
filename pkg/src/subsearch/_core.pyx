# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernels.

Same contracts as :mod:`subsearch._pycore`; tables are int64 (scaled exact
rationals, overflow pre-checked by the caller) or float64 numpy arrays.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

ctypedef fused num_t:
    int64_t
    double


cdef inline int _popcount(int64_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def check_structure(num_t[::1] T, int n, double tol):
    cdef int64_t size = (<int64_t>1) << n
    cdef int64_t A, bs, bt
    cdef int s, t
    cdef num_t lhs, rhs
    cdef int64_t mono_A = -1, sub_A = -1, sup_A = -1
    cdef int mono_s = -1, sub_s = -1, sub_t = -1, sup_s = -1, sup_t = -1
    normalized = abs(T[0]) <= tol
    with nogil:
        for A in range(size):
            if mono_A >= 0 and sub_A >= 0 and sup_A >= 0:
                break
            for s in range(n):
                bs = (<int64_t>1) << s
                if A & bs:
                    continue
                if mono_A < 0 and T[A | bs] < T[A] - tol:
                    mono_A = A
                    mono_s = s
                if sub_A >= 0 and sup_A >= 0:
                    continue
                for t in range(s + 1, n):
                    bt = (<int64_t>1) << t
                    if A & bt:
                        continue
                    lhs = T[A | bs] + T[A | bt]
                    rhs = T[A | bs | bt] + T[A]
                    if sub_A < 0 and lhs < rhs - tol:
                        sub_A = A
                        sub_s = s
                        sub_t = t
                    if sup_A < 0 and lhs > rhs + tol:
                        sup_A = A
                        sup_s = s
                        sup_t = t
    mono = (int(mono_A), mono_s) if mono_A >= 0 else None
    sub = (int(sub_A), sub_s, sub_t) if sub_A >= 0 else None
    sup = (int(sup_A), sup_s, sup_t) if sup_A >= 0 else None
    return bool(normalized), mono, sub, sup


def argmax_union(num_t[::1] H, int64_t cand, double tol):
    cdef int64_t sub = cand
    cdef int64_t union = 0
    cdef num_t best = H[cand]
    with nogil:
        while True:
            if H[sub] > best:
                best = H[sub]
            if sub == 0:
                break
            sub = (sub - 1) & cand
        sub = cand
        while True:
            if H[sub] >= best - tol:
                union |= sub
            if sub == 0:
                break
            sub = (sub - 1) & cand
    return best, int(union)


def min_connectivity(num_t[::1] H, int n, double tol):
    if n < 2:
        return None, 0
    cdef int64_t full = ((<int64_t>1) << n) - 1
    cdef int64_t B, pick = 0
    cdef int pc, pick_pc = n + 1
    cdef num_t d, best = H[1] + H[full ^ 1] - H[full]
    with nogil:
        for B in range(1, full):
            d = H[B] + H[full ^ B] - H[full]
            if d < best:
                best = d
        for B in range(1, full):
            d = H[B] + H[full ^ B] - H[full]
            if d <= best + tol:
                pc = _popcount(B)
                if pc < pick_pc:
                    pick_pc = pc
                    pick = B
    return best, int(pick)


def suffix_dp(num_t[::1] G, num_t[::1] F, int n):
    cdef int64_t full = ((<int64_t>1) << n) - 1
    R_arr = np.zeros(full + 1, dtype=np.asarray(G).dtype)
    cdef num_t[::1] R = R_arr
    cdef int64_t A, rest, low, B
    cdef num_t v, best, gA
    cdef bint first
    with nogil:
        A = full - 1
        while A >= 0:
            gA = G[A]
            rest = full ^ A
            first = True
            best = 0
            while rest:
                low = rest & -rest
                rest ^= low
                B = A | low
                v = (G[B] - gA) * F[B] + R[B]
                if first or v < best:
                    best = v
                    first = False
            R[A] = best
            A -= 1
    return R_arr


cdef void _perm_rec(num_t[::1] G, num_t[::1] F, int n, int depth, int64_t A,
                    num_t acc, bint* used, num_t[::1] out, int64_t* pos) nogil:
    cdef int s
    cdef int64_t B
    if depth == n:
        out[pos[0]] = acc
        pos[0] += 1
        return
    for s in range(n):
        if not used[s]:
            used[s] = True
            B = A | ((<int64_t>1) << s)
            _perm_rec(G, F, n, depth + 1, B, acc + (G[B] - G[A]) * F[B], used, out, pos)
            used[s] = False


def permutation_costs(num_t[::1] G, num_t[::1] F, int n):
    cdef int64_t total = 1
    cdef int k
    for k in range(2, n + 1):
        total *= k
    out_arr = np.zeros(total, dtype=np.asarray(G).dtype)
    cdef num_t[::1] out = out_arr
    cdef bint used[64]
    cdef int64_t pos = 0
    cdef num_t zero = 0
    for k in range(64):
        used[k] = False
    with nogil:
        _perm_rec(G, F, n, 0, 0, zero, used, out, &pos)
    return out_arr


def fictitious_play(double[:, ::1] M, int64_t iters, double tol, int64_t check_every):
    cdef Py_ssize_t R = M.shape[0], C = M.shape[1], r, c
    row_counts_arr = np.zeros(R, dtype=np.int64)
    col_counts_arr = np.zeros(C, dtype=np.int64)
    row_payoff_arr = np.zeros(R)
    col_payoff_arr = np.zeros(C)
    cdef int64_t[::1] row_counts = row_counts_arr
    cdef int64_t[::1] col_counts = col_counts_arr
    cdef double[::1] row_payoff = row_payoff_arr
    cdef double[::1] col_payoff = col_payoff_arr
    cdef Py_ssize_t i = 0, j = 0
    cdef int64_t t = 0
    cdef double lo, hi
    with nogil:
        while t < iters:
            col_counts[j] += 1
            for r in range(R):
                row_payoff[r] += M[r, j]
            i = 0
            for r in range(1, R):
                if row_payoff[r] < row_payoff[i]:
                    i = r
            row_counts[i] += 1
            for c in range(C):
                col_payoff[c] += M[i, c]
            j = 0
            for c in range(1, C):
                if col_payoff[c] > col_payoff[j]:
                    j = c
            t += 1
            if t % check_every == 0 or t == iters:
                lo = row_payoff[i] / t
                hi = col_payoff[j] / t
                if hi - lo <= tol:
                    break
    lower = float(np.min(row_payoff_arr)) / t
    upper = float(np.max(col_payoff_arr)) / t
    return row_counts_arr, col_counts_arr, int(t), lower, upper
