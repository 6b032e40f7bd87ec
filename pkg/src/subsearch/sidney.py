"""Expected search cost, generalized Sidney decomposition and approximations.

Orders are tuples of element indices: ``order[t]`` is searched at step
``t + 1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .density import SearchInstance, max_density_subset
from .numeric import EPS, bits, coerce, eq
from .setfn import CapacityError, curvature, dual, expand

MAX_DP_N = 16
MAX_PERM_N = 9


def check_order(order: Sequence[int], n: int) -> tuple:
    order = tuple(int(x) for x in order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"not a permutation of 0..{n - 1}: {order}")
    return order


def expected_cost(inst: SearchInstance, order: Sequence[int]):
    """``sum_j (g(S_j) - g(S_j - j)) f(S_j)`` along ``order``."""
    order = check_order(order, inst.n)
    f, g = inst.f, inst.g
    A = 0
    prev_g = g(0)
    total = coerce(0, inst.mode)
    for j in order:
        A |= 1 << j
        gA = g(A)
        total += (gA - prev_g) * f(A)
        prev_g = gA
    return total


@dataclass
class Decomposition:
    """Ordered max-density blocks, each computed in the instance contracted by its predecessors.

    ``stages[i]`` holds ``(g_i(A_i), f_i(A_i), g_i(rest_i))`` for that
    contracted instance, where ``rest_i`` is everything not yet placed.
    """

    blocks: list
    rhos: list
    stages: list = field(default_factory=list)

    def order(self) -> tuple:
        return tuple(e for b in self.blocks for e in bits(b))


def sidney_decomposition(inst: SearchInstance, backend=None) -> Decomposition:
    blocks, rhos, stages = [], [], []
    cur = inst
    index_map = tuple(range(inst.n))
    while True:
        res = max_density_subset(cur, backend)
        blocks.append(expand(res.set, index_map))
        rhos.append(res.rho)
        stages.append((cur.g(res.set), cur.f(res.set), cur.g(cur.full)))
        remaining = cur.full & ~res.set
        if remaining == 0:
            return Decomposition(blocks, rhos, stages)
        index_map = tuple(index_map[i] for i in bits(remaining))
        cur = cur.contract(res.set)


@dataclass
class CostReport:
    order: tuple
    cost: object
    lower_bound: object
    ratio_bound: object
    method: str = "sidney"
    blocks: list = field(default_factory=list)


def decomposition_lower_bound(dec: Decomposition):
    """Lower bound on the optimum certified block by block.

    Each block contributes half its own mass-times-cost plus the exact
    cross term paid by the later blocks for its cost.
    """
    total = 0
    for gA, fA, grest in dec.stages:
        total += gA * fA / 2 + (grest - gA) * fA
    return total


def two_approx_search(inst: SearchInstance, backend=None) -> CostReport:
    """Blocks in decomposition order, ascending index inside each block."""
    dec = sidney_decomposition(inst, backend)
    order = dec.order()
    return CostReport(
        order=order,
        cost=expected_cost(inst, order),
        lower_bound=decomposition_lower_bound(dec),
        ratio_bound=curvature_ratio_bound(inst),
        method="sidney",
        blocks=dec.blocks,
    )


def brute_force_optimal(inst: SearchInstance, method: str = "dp", backend=None):
    """Exact optimum and the lexicographically smallest optimal order.

    ``dp`` runs the subset dynamic program (n <= 16); ``perm`` enumerates
    every permutation (n <= 9).
    """
    G, F = inst.g.ktable(), inst.f.ktable()
    if method == "dp":
        if inst.n > MAX_DP_N:
            raise CapacityError("subset dynamic program", inst.n, MAX_DP_N)
        return kernels.optimal_order(G, F, inst.n, backend)
    if method == "perm":
        costs, idx, best = _perm_costs(inst, backend)
        k = int(idx[0])
        return _unrank(k, inst.n), best
    raise ValueError(f"unknown brute-force method {method!r}")


def _perm_costs(inst, backend):
    if inst.n > MAX_PERM_N:
        raise CapacityError("permutation enumeration", inst.n, MAX_PERM_N)
    costs, scale, exact = kernels.permutation_costs(inst.g.ktable(), inst.f.ktable(), inst.n, backend)
    if exact:
        costs = np.asarray(costs, dtype=object) if not isinstance(costs, np.ndarray) else costs
        lo = min(costs.tolist())
        idx = np.flatnonzero(costs == lo)
        return costs, idx, Fraction(int(lo), scale)
    costs = np.asarray(costs, dtype=np.float64)
    lo = float(costs.min())
    idx = np.flatnonzero(costs <= lo + EPS * max(1.0, abs(lo)))
    return costs, idx, lo


def _unrank(k: int, n: int) -> tuple:
    """The ``k``-th permutation of ``range(n)`` in lexicographic order."""
    pool = list(range(n))
    out = []
    fact = 1
    for i in range(2, n):
        fact *= i
    for i in range(n - 1, -1, -1):
        q, k = divmod(k, fact)
        out.append(pool.pop(q))
        if i:
            fact //= i
    return tuple(out)


def all_optimal_orders(inst: SearchInstance, backend=None) -> list:
    """Every cost-minimal permutation (n <= 9), in lexicographic order."""
    _, idx, _ = _perm_costs(inst, backend)
    return [_unrank(int(k), inst.n) for k in idx]


def epsilon(inst: SearchInstance, order: Sequence[int]):
    """``sum_j d_j f(S_j) * d_j g(S_j)`` along ``order``."""
    order = check_order(order, inst.n)
    f, g = inst.f, inst.g
    A = 0
    total = coerce(0, inst.mode)
    for j in order:
        B = A | (1 << j)
        total += (f(B) - f(A)) * (g(B) - g(A))
        A = B
    return total


def epsilon_greedy_orders(inst: SearchInstance):
    """``pi1`` by ``f(j)`` non-increasing and ``pi2`` by ``g#(j)`` non-decreasing, ties by index.

    ``pi2`` is the reversal of the greedy order for the dual pair
    ``(g#, f#)``, which is where the curvature guarantee for ``g#`` holds.
    """
    gs = dual(inst.g)
    pi1 = tuple(sorted(range(inst.n), key=lambda j: (-inst.f(1 << j), j)))
    pi2 = tuple(sorted(range(inst.n), key=lambda j: (gs(1 << j), j)))
    return pi1, pi2


def min_epsilon(inst: SearchInstance):
    """Brute-force minimum of ``epsilon`` over all orders (n <= 9)."""
    if inst.n > MAX_PERM_N:
        raise CapacityError("epsilon minimization", inst.n, MAX_PERM_N)
    best_order, best = None, None
    for order in itertools.permutations(range(inst.n)):
        v = epsilon(inst, order)
        if best is None or v < best and not eq(v, best):
            best_order, best = order, v
    return best_order, best


def curvature_ratio_bound(inst: SearchInstance):
    """``2 / (1 + delta)`` from the total curvatures of ``f`` and ``g#``.

    Falls back to 2 when either curvature is 1 or undefined (a zero singleton).
    """
    two = coerce(2, inst.mode)
    try:
        kf = curvature(inst.f)
        kg = curvature(dual(inst.g))
    except ValueError:
        return two
    if not (kf < 1 and kg < 1) or eq(kf, 1) or eq(kg, 1):
        return two
    theta = (1 - kf) * (1 - kg)
    delta = min(theta, 2 * theta * max(1 - kf, 1 - kg) / (1 + theta))
    return two / (1 + delta)


def reverse(order: Sequence[int]) -> tuple:
    return tuple(reversed(tuple(order)))
