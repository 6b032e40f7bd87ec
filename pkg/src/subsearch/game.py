"""The zero-sum search game: Hider picks a location, Searcher picks an order.

The payoff to the Hider is the cost ``f(S_s^pi)`` of the prefix of ``pi``
ending at the hiding place ``s``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .density import SearchInstance
from .numeric import FLOAT, RATIONAL, coerce, eq, lt
from .setfn import (
    MAX_VERIFY_N,
    CapacityError,
    ModularFunction,
    SetFunction,
    curvature,
    in_base_polyhedron,
)
from .sidney import brute_force_optimal, expected_cost, MAX_DP_N
from .spd import Leaf, NotDecomposable, NotDecomposableError, Parallel, Series, spd_decompose

MAX_MATRIX_N = 7
MAX_ENUM_FIRST_N = 16


# --- Searcher strategies ------------------------------------------------------

@dataclass
class LeafOrder:
    """A fixed order of ground-set indices."""

    order: tuple

    @property
    def mask(self) -> int:
        m = 0
        for s in self.order:
            m |= 1 << s
        return m

    def sample(self, rng: random.Random) -> tuple:
        return self.order

    def to_json(self, labels) -> dict:
        return {"kind": "order", "order": [labels[s] for s in self.order]}


@dataclass
class SeriesNode:
    """Search ``first`` then ``rest``; with probability ``alpha`` swap the two.

    ``alpha = 0`` is the plain prefix strategy.
    """

    first: object
    rest: object
    alpha: object = 0

    @property
    def mask(self) -> int:
        return self.first.mask | self.rest.mask

    def sample(self, rng: random.Random) -> tuple:
        a, b = self.first.sample(rng), self.rest.sample(rng)
        return b + a if rng.random() < self.alpha else a + b

    def to_json(self, labels) -> dict:
        return {
            "kind": "series",
            "alpha": _jnum(self.alpha),
            "first": self.first.to_json(labels),
            "rest": self.rest.to_json(labels),
        }


@dataclass
class ParallelNode:
    """Search ``left`` then ``right`` with probability ``q``, else the reverse."""

    left: object
    right: object
    q: object

    @property
    def mask(self) -> int:
        return self.left.mask | self.right.mask

    def sample(self, rng: random.Random) -> tuple:
        a, b = self.left.sample(rng), self.right.sample(rng)
        return a + b if rng.random() < self.q else b + a

    def to_json(self, labels) -> dict:
        return {
            "kind": "parallel",
            "q": _jnum(self.q),
            "left": self.left.to_json(labels),
            "right": self.right.to_json(labels),
        }


@dataclass
class FirstThenUniform:
    """Start at ``s`` with probability ``x[k]`` (``s = elements[k]``), then a uniformly random order."""

    elements: tuple
    x: list

    @property
    def mask(self) -> int:
        m = 0
        for s in self.elements:
            m |= 1 << s
        return m

    def sample(self, rng: random.Random) -> tuple:
        k = rng.choices(range(len(self.elements)), weights=[float(v) for v in self.x])[0]
        rest = [s for i, s in enumerate(self.elements) if i != k]
        rng.shuffle(rest)
        return (self.elements[k], *rest)

    def to_json(self, labels) -> dict:
        return {
            "kind": "first_then_uniform",
            "first": {labels[s]: _jnum(v) for s, v in zip(self.elements, self.x)},
        }


def _jnum(v):
    return str(v) if isinstance(v, (Fraction, int)) else float(v)


@dataclass
class GameSolution:
    value: object
    phi: object
    hider: list
    searcher: object
    method: str = "spd"

    def to_json(self, labels) -> dict:
        return {
            "value": _jnum(self.value),
            "phi": _jnum(self.phi),
            "hider": {labels[s]: _jnum(v) for s, v in enumerate(self.hider)},
            "searcher": self.searcher.to_json(labels),
            "method": self.method,
        }


@dataclass
class MatrixGameResult:
    value: object
    lower: object
    upper: object
    searcher: dict
    hider: list
    iterations: int
    method: str
    converged: bool = True


# --- evaluation ----------------------------------------------------------------

def search_cost_modular(f: SetFunction, x: Sequence, order: Sequence[int]):
    """Expected cost of ``order`` against a Hider playing ``x``."""
    g = ModularFunction(f.ground, list(x), f.mode)
    return expected_cost(SearchInstance(f, g, validate=False), order)


def in_scaled_base_polyhedron(f: SetFunction, x: Sequence):
    """``x(A) <= f(A)/f(S)`` for all ``A`` and ``x(S) = 1``; returns ``(ok, witness)``."""
    if f.n > MAX_VERIFY_N:
        raise CapacityError("scaled base polyhedron check", f.n, MAX_VERIFY_N)
    fS = f(f.full)
    if not lt(0, fS):
        raise ValueError("scaled base polyhedron needs f(S) > 0")
    return in_base_polyhedron(f, [coerce(v, f.mode) for v in x], scale=fS)


def expected_cost_vector(f: SetFunction, searcher) -> list:
    """Exact ``C(p, s)`` for every ``s``, by recursion over the strategy tree."""
    if searcher.mask != f.full:
        raise ValueError("searcher strategy does not cover the ground set")
    out = [None] * f.n
    memo = {}
    for s, v in _node_costs(f, searcher, 0, memo).items():
        out[s] = v
    return out


def _node_costs(f, node, before: int, memo) -> dict:
    """Expected cost of each element of ``node`` when ``before`` has already been searched."""
    key = (id(node), before)
    if key in memo:
        return memo[key]
    if isinstance(node, LeafOrder):
        res, A = {}, before
        for s in node.order:
            A |= 1 << s
            res[s] = f(A)
    elif isinstance(node, SeriesNode):
        res = _mix(f, node.first, node.rest, 1 - coerce(node.alpha, f.mode), before, memo)
    elif isinstance(node, ParallelNode):
        res = _mix(f, node.left, node.right, coerce(node.q, f.mode), before, memo)
    elif isinstance(node, FirstThenUniform):
        res = _first_then_uniform(f, node, before)
    else:
        raise TypeError(f"malformed searcher node {node!r}")
    memo[key] = res
    return res


def _mix(f, a, b, p, before, memo) -> dict:
    """``a`` then ``b`` with probability ``p``, else ``b`` then ``a``."""
    one = coerce(1, f.mode)
    res = {}
    for x, y in ((a, b), (b, a)):
        w = p if x is a else one - p
        if w == 0:
            continue
        for s, v in _node_costs(f, x, before, memo).items():
            res[s] = res.get(s, 0) + w * v
        for s, v in _node_costs(f, y, before | x.mask, memo).items():
            res[s] = res.get(s, 0) + w * v
    return res


def _first_then_uniform(f, node: FirstThenUniform, before: int) -> dict:
    elems = node.elements
    m = len(elems)
    x = [coerce(v, f.mode) for v in node.x]
    if isinstance(f, ModularFunction) and before == 0:
        # prefix before s is a uniform random subset of the others: each included w.p. 1/2
        w = f.weights
        total = sum((w[s] for s in elems), coerce(0, f.mode))
        half = coerce(Fraction(1, 2), f.mode)
        res = {}
        for k, s in enumerate(elems):
            acc = x[k] * w[s]
            for j, t in enumerate(elems):
                if j != k:
                    acc += x[j] * (w[t] + w[s] + half * (total - w[t] - w[s]))
            res[s] = acc
        return res
    if m > MAX_ENUM_FIRST_N:
        raise CapacityError("first-then-uniform cost enumeration", m, MAX_ENUM_FIRST_N)
    res = {s: coerce(0, f.mode) for s in elems}
    for j, t in enumerate(elems):
        if x[j] == 0:
            continue
        tb = 1 << t
        res[t] += x[j] * f(before | tb)
        others = [u for u in elems if u != t]
        r = len(others)
        for k, s in enumerate(others):
            pool = others[:k] + others[k + 1:]
            acc = coerce(0, f.mode)
            for size in range(len(pool) + 1):
                # position of s uniform over r slots, then a uniform subset of that size
                w = coerce(Fraction(1, r * math.comb(r - 1, size)), f.mode)
                for P in itertools.combinations(pool, size):
                    mask = before | tb | (1 << s)
                    for u in P:
                        mask |= 1 << u
                    acc += w * f(mask)
            res[s] += x[j] * acc
    return res


# --- equilibria -----------------------------------------------------------------

def modular_game_solution(f: SetFunction) -> GameSolution:
    if not isinstance(f, ModularFunction):
        raise ValueError("modular game solution needs a modular cost function")
    w = f.weights
    if any(not lt(0, v) for v in w):
        raise ValueError("modular game solution needs positive costs")
    total = f(f.full)
    x = [v / total for v in w]
    phi = sum((v * v for v in w), coerce(0, f.mode)) / total
    searcher = FirstThenUniform(tuple(range(f.n)), x)
    return GameSolution((total + phi) / 2, phi, x, searcher, "modular")


def _uniform(f: SetFunction) -> ModularFunction:
    return ModularFunction(f.ground, [1] * f.n, f.mode)


def game_value_spd(f: SetFunction, equalize: bool = True, backend=None) -> GameSolution:
    """Equilibrium of a series-parallel decomposable game.

    With ``equalize`` each series step also mixes in the order that searches
    the complement first, so that every location costs exactly ``V``; without
    it the prefix strategy only guarantees cost at most ``V`` on the initial set.
    """
    inst = SearchInstance(f, _uniform(f), validate=False)
    tree = spd_decompose(inst, backend=backend)
    if isinstance(tree, NotDecomposable):
        raise NotDecomposableError(f.ground.names(tree.mask))
    value, phi, x, searcher = _solve_node(tree, tuple(range(f.n)), equalize)
    hider = [coerce(0, f.mode)] * f.n
    for i, v in x.items():
        hider[i] = v
    return GameSolution(value, phi, hider, searcher, "spd")


def _solve_node(node, index_map, equalize):
    """``(V, phi, x as {index: prob}, searcher)`` for the node's own instance."""
    f = node.instance.f
    fS = f(f.full)
    if isinstance(node, Leaf):
        one = coerce(1, f.mode)
        return fS, fS, {node.element: one}, LeafOrder((node.element,))
    local = {g: i for i, g in enumerate(index_map)}
    if isinstance(node, Series):
        I = node.initial
        first_map = tuple(i for i in index_map if I >> i & 1)
        rest_map = tuple(i for i in index_map if not I >> i & 1)
        v1, _, _, s1 = _solve_node(node.first, first_map, equalize)
        v2, _, x2, s2 = _solve_node(node.rest, rest_map, equalize)
        fI = f(sum(1 << local[i] for i in first_map))
        value = fI + v2
        x = dict(x2)
        alpha = 0
        if equalize:
            den = fS - v1
            alpha = (value - v1) / den if not eq(den, 0) else coerce(1, f.mode)
        phi = sum((p * f(1 << local[i]) for i, p in x.items()), coerce(0, f.mode))
        return value, phi, x, SeriesNode(s1, s2, alpha)
    if isinstance(node, Parallel):
        A = node.separator
        left_map = tuple(i for i in index_map if A >> i & 1)
        right_map = tuple(i for i in index_map if not A >> i & 1)
        _, phiA, xA, sA = _solve_node(node.left, left_map, equalize)
        _, phiB, xB, sB = _solve_node(node.right, right_map, equalize)
        fA = f(sum(1 << local[i] for i in left_map))
        fB = f(sum(1 << local[i] for i in right_map))
        x = {i: fA / fS * p for i, p in xA.items()}
        x.update({i: fB / fS * p for i, p in xB.items()})
        q = coerce(Fraction(1, 2), f.mode) + (phiA - phiB) / (2 * fS)
        phi = (fA * phiA + fB * phiB) / fS
        return (fS + phi) / 2, phi, x, ParallelNode(sA, sB, q)
    raise TypeError(f"unexpected decomposition node {node!r}")


def curvature_approx_strategies(f: SetFunction):
    """Strategies of the modular surrogate ``h(A) = sum of f(s)``, and their factor ``1/(1 - kappa)``."""
    kappa = curvature(f)
    if not lt(kappa, Fraction(1, 2) if f.mode == RATIONAL else 0.5):
        raise ValueError(f"curvature approximation needs kappa < 1/2, got {kappa}")
    h = ModularFunction(f.ground, [f(1 << s) for s in range(f.n)], f.mode)
    sol = modular_game_solution(h)
    return sol.hider, sol.searcher, 1 / (1 - kappa)


# --- best responses ---------------------------------------------------------------

def best_response_hider(f: SetFunction, searcher):
    """Location with the largest expected cost (lowest index on ties) and that cost."""
    costs = expected_cost_vector(f, searcher)
    best = 0
    for s in range(1, f.n):
        if lt(costs[best], costs[s]):
            best = s
    return best, costs[best]


def best_response_searcher(f: SetFunction, x: Sequence, backend=None):
    """Cheapest order against Hider strategy ``x`` (lexicographically smallest optimum)."""
    if f.n > MAX_DP_N:
        raise CapacityError("searcher best response", f.n, MAX_DP_N)
    g = ModularFunction(f.ground, list(x), f.mode)
    return brute_force_optimal(SearchInstance(f, g, validate=False), backend=backend)


# --- matrix-game oracle -----------------------------------------------------------

def payoff_matrix(f: SetFunction) -> tuple:
    """Rows are all orders in lexicographic order; entry ``[pi, s] = f(S_s^pi)``."""
    if f.n > MAX_MATRIX_N:
        raise CapacityError("matrix game", f.n, MAX_MATRIX_N)
    t = f.table()
    perms = list(itertools.permutations(range(f.n)))
    rows = []
    for pi in perms:
        row = [None] * f.n
        A = 0
        for s in pi:
            A |= 1 << s
            row[s] = t[A]
        rows.append(row)
    return perms, rows


def matrix_game_solve(f: SetFunction, method: str = "fictitious_play", iters: int = 200_000,
                      tol: float = 1e-3, backend=None) -> MatrixGameResult:
    perms, rows = payoff_matrix(f)
    if method == "fictitious_play":
        M = np.array([[float(v) for v in r] for r in rows])
        rc, cc, t, lower, upper = kernels.fictitious_play(M, iters, tol, backend=backend)
        searcher = {perms[i]: int(c) / t for i in np.flatnonzero(rc) for c in [rc[i]]}
        hider = [float(c) / t for c in cc]
        return MatrixGameResult((lower + upper) / 2, lower, upper, searcher, hider, int(t),
                                method, upper - lower <= tol)
    if method == "exact_lp":
        return _solve_lp(f, perms, rows)
    raise ValueError(f"unknown matrix game method {method!r}")


def _solve_lp(f, perms, rows) -> MatrixGameResult:
    """Solve both sides with HiGHS, snap to rationals and certify the bounds exactly."""
    from scipy.optimize import linprog

    M = np.array([[float(v) for v in r] for r in rows])
    R, C = M.shape
    # searcher: min v  s.t.  M^T p <= v, sum p = 1
    c = np.zeros(R + 1)
    c[-1] = 1
    res_p = linprog(c, A_ub=np.hstack([M.T, -np.ones((C, 1))]), b_ub=np.zeros(C),
                    A_eq=np.hstack([np.ones((1, R)), [[0]]]), b_eq=[1],
                    bounds=[(0, None)] * R + [(None, None)], method="highs")
    # hider: max v  s.t.  M x >= v, sum x = 1
    cx = np.zeros(C + 1)
    cx[-1] = -1
    res_x = linprog(cx, A_ub=np.hstack([-M, np.ones((R, 1))]), b_ub=np.zeros(R),
                    A_eq=np.hstack([np.ones((1, C)), [[0]]]), b_eq=[1],
                    bounds=[(0, None)] * C + [(None, None)], method="highs")
    if res_p.status != 0 or res_x.status != 0:
        raise RuntimeError(f"LP solver failed: {res_p.message} / {res_x.message}")
    cols = [list(c) for c in zip(*rows)]
    p = _vertex(res_p.x[:R], M.T @ res_p.x[:R], cols, f.mode, max) or _snap(res_p.x[:R], f.mode)
    x = _vertex(res_x.x[:C], M @ res_x.x[:C], rows, f.mode, min) or _snap(res_x.x[:C], f.mode)
    zero = coerce(0, f.mode)
    upper = max(sum((p[i] * rows[i][s] for i in range(R) if p[i]), zero) for s in range(C))
    lower = min(sum((x[s] * r[s] for s in range(C)), zero) for r in rows)
    searcher = {perms[i]: p[i] for i in range(R) if p[i]}
    exact = eq(lower, upper)
    value = lower if exact else (lower + upper) / 2
    return MatrixGameResult(value, lower, upper, searcher, x, 0, "exact_lp", exact)


def _vertex(sol, payoffs, constraints, mode, pick):
    """Recover a basic LP solution exactly from its support and tight constraints.

    ``constraints[k][i]`` is the payoff of opposing pure strategy ``k`` against
    our pure strategy ``i``; tight ones are those within 1e-9 of the optimum.
    Returns None when the exact system is singular or infeasible.
    """
    if mode == FLOAT:
        return None
    support = [i for i, a in enumerate(sol) if a > 1e-12]
    best = pick(payoffs)
    tol = 1e-9 * max(1.0, abs(best))
    tight = [k for k, v in enumerate(payoffs) if abs(v - best) <= tol]
    # unknowns: probabilities on the support, then the value
    eqs = [[Fraction(constraints[k][i]) for i in support] + [Fraction(-1), Fraction(0)] for k in tight]
    eqs.append([Fraction(1)] * len(support) + [Fraction(0), Fraction(1)])
    sol_exact = _solve_exact(eqs, len(support) + 1)
    if sol_exact is None or any(v < 0 for v in sol_exact[:-1]):
        return None
    out = [Fraction(0)] * len(sol)
    for i, v in zip(support, sol_exact):
        out[i] = v
    return out


def _solve_exact(rows, nvars):
    """Unique solution of an augmented rational system, or None."""
    rows = [r[:] for r in rows]
    r = 0
    for c in range(nvars):
        k = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if k is None:
            return None
        rows[r], rows[k] = rows[k], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                m = rows[i][c]
                rows[i] = [a - m * b for a, b in zip(rows[i], rows[r])]
        r += 1
    if any(row[-1] != 0 for row in rows[r:]):
        return None
    return [rows[i][-1] for i in range(nvars)]


def _snap(v, mode):
    v = np.clip(v, 0, None)
    if mode == FLOAT:
        return list(v / v.sum())
    fr = [Fraction(float(a)).limit_denominator(10**6) for a in v]
    total = sum(fr)
    return [a / total for a in fr]
