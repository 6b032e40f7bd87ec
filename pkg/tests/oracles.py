"""Brute-force reference implementations written directly from the definitions.

Nothing here imports the solver modules; inputs are plain value tables
indexed by bitmask.
"""
from __future__ import annotations

import itertools
from fractions import Fraction


def members(mask):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def order_cost(ft, gt, order):
    """Expected cost: sum over j of P(target is j) times f(prefix through j)."""
    total, A = 0, 0
    for j in order:
        B = A | (1 << j)
        total += (gt[B] - gt[A]) * ft[B]
        A = B
    return total


def all_costs(ft, gt, n):
    return {pi: order_cost(ft, gt, pi) for pi in itertools.permutations(range(n))}


def optimum(ft, gt, n):
    costs = all_costs(ft, gt, n)
    best = min(costs.values())
    return best, sorted(pi for pi, c in costs.items() if c == best)


def max_density_set(ft, gt, n):
    """Union of every nonempty set of maximum ``g/f``."""
    best, union = None, 0
    for m in range(1, 1 << n):
        r = Fraction(gt[m]) / Fraction(ft[m])
        if best is None or r > best:
            best, union = r, m
        elif r == best:
            union |= m
    return union, best


def is_submodular(t, n):
    return all(t[A] + t[B] >= t[A | B] + t[A & B] for A in range(1 << n) for B in range(1 << n))


def is_supermodular(t, n):
    return is_submodular([-v for v in t], n)


def is_nondecreasing(t, n):
    return all(t[A] <= t[A | (1 << s)] for A in range(1 << n) for s in range(n))


def closure(t, n, A):
    """Largest B containing A with the same value, by scanning all supersets."""
    best = A
    for B in range(1 << n):
        if B & A == A and t[B] == t[A] and bin(B).count("1") > bin(best).count("1"):
            best = B
    return best


def is_initial(t, n, I):
    full = (1 << n) - 1
    if I in (0, full):
        return False
    return all(I & ~closure(t, n, 1 << s) == 0 for s in members(full & ~I))


def separators(ft, gt, n):
    full = (1 << n) - 1
    return [B for B in range(1, full)
            if ft[B] + ft[full ^ B] == ft[full] and gt[B] + gt[full ^ B] == gt[full]]


def modular_table(w):
    n = len(w)
    return [sum(w[i] for i in members(m)) for m in range(1 << n)]


def dual_table(t, n):
    full = (1 << n) - 1
    return [t[full] - t[full ^ m] for m in range(1 << n)]


def game_value_lp(ft, n):
    """Value of the search game by the Hider's linear program (scipy, float)."""
    import numpy as np
    from scipy.optimize import linprog

    perms = list(itertools.permutations(range(n)))
    M = np.zeros((len(perms), n))
    for r, pi in enumerate(perms):
        A = 0
        for s in pi:
            A |= 1 << s
            M[r, s] = float(ft[A])
    c = np.zeros(n + 1)
    c[-1] = -1
    res = linprog(c, A_ub=np.hstack([-M, np.ones((len(perms), 1))]), b_ub=np.zeros(len(perms)),
                  A_eq=[[1] * n + [0]], b_eq=[1], bounds=[(0, None)] * n + [(None, None)], method="highs")
    return res.x[-1]
