"""Single-machine scheduling and tree-search adapters.

A precedence instance becomes a search instance with cost
``f(A) = h(p(closure(A)))`` and weight ``g(A) = sum of w_B over B inside A``
(or a plain per-job sum).
"""
from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from itertools import combinations
from typing import Optional, Sequence

from .density import SearchInstance
from .numeric import FLOAT, RATIONAL, bits, coerce, mask_of
from .setfn import GroundSet, ModularFunction, SetFunction, _Memo
from .sidney import CostReport, brute_force_optimal, expected_cost, two_approx_search


# --- concave transforms -----------------------------------------------------

class Identity:
    kind = "identity"
    exact = True

    def __call__(self, y):
        return y

    def slope_at_zero(self):
        return 1

    def slope_at(self, y):
        return 1

    def to_json(self):
        return {"kind": self.kind}


@dataclass(frozen=True)
class Power:
    beta: float
    kind = "power"
    exact = False

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ValueError(f"power h needs beta in (0, 1], got {self.beta}")

    def __call__(self, y):
        return float(y) ** self.beta if y > 0 else 0.0

    def slope_at_zero(self):
        return 1.0 if self.beta == 1 else math.inf

    def slope_at(self, y):
        return self.beta * float(y) ** (self.beta - 1)

    def to_json(self):
        return {"kind": self.kind, "param": self.beta}


@dataclass(frozen=True)
class Log:
    """``h(y) = log(1 + a*y)``."""

    a: object
    kind = "log"
    exact = False

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("log h needs a > 0")

    def __call__(self, y):
        return math.log1p(float(self.a) * float(y))

    def slope_at_zero(self):
        return self.a

    def slope_at(self, y):
        if isinstance(self.a, float) or isinstance(y, float):
            return self.a / (1 + self.a * y)
        return Fraction(self.a) / (1 + self.a * Fraction(y))

    def to_json(self):
        return {"kind": self.kind, "param": _num_json(self.a)}


@dataclass(frozen=True)
class ExpDiscount:
    """``h(y) = (1 - exp(-r*y)) / r``."""

    r: float
    kind = "exp_discount"
    exact = False

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError("discounted h needs r > 0")

    def __call__(self, y):
        r = float(self.r)
        return -math.expm1(-r * float(y)) / r

    def slope_at_zero(self):
        return 1.0

    def slope_at(self, y):
        return math.exp(-float(self.r) * float(y))

    def to_json(self):
        return {"kind": self.kind, "param": _num_json(self.r)}


class Table:
    """Piecewise-linear ``h`` through samples ``(xs[i], ys[i])``, extended by its last slope."""

    kind = "table"

    def __init__(self, xs: Sequence, ys: Sequence):
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("table h needs at least two samples and equal-length xs, ys")
        self.exact = not any(isinstance(v, float) for v in list(xs) + list(ys))
        conv = Fraction if self.exact else float
        self.xs = [conv(x) for x in xs]
        self.ys = [conv(y) for y in ys]
        if self.xs[0] != 0 or self.ys[0] != 0:
            raise ValueError("table h must start at (0, 0)")
        if any(b <= a for a, b in zip(self.xs, self.xs[1:])):
            raise ValueError("table h sample points must increase")
        self.slopes = [(y2 - y1) / (x2 - x1) for x1, x2, y1, y2 in
                       zip(self.xs, self.xs[1:], self.ys, self.ys[1:])]
        if any(s < 0 for s in self.slopes):
            raise ValueError("table h must be nondecreasing")
        if any(b > a for a, b in zip(self.slopes, self.slopes[1:])):
            raise ValueError("table h must be concave (slopes non-increasing)")

    def _segment(self, y):
        for i in range(len(self.slopes)):
            if y <= self.xs[i + 1]:
                return i
        return len(self.slopes) - 1

    def __call__(self, y):
        i = self._segment(y)
        return self.ys[i] + self.slopes[i] * (y - self.xs[i])

    def slope_at_zero(self):
        return self.slopes[0]

    def slope_at(self, y):
        """Left derivative at ``y``."""
        return self.slopes[self._segment(y)]

    def to_json(self):
        return {"kind": self.kind, "xs": [_num_json(x) for x in self.xs], "ys": [_num_json(y) for y in self.ys]}


def _num_json(v):
    return str(v) if isinstance(v, (Fraction, int)) else v


def h_from_json(spec: Optional[dict]):
    if spec is None:
        return Identity()
    kind = spec.get("kind", "identity")
    param = spec.get("param")
    if kind == "identity":
        return Identity()
    if kind == "power":
        return Power(float(param))
    if kind == "log":
        return Log(_num_param(param))
    if kind == "exp_discount":
        return ExpDiscount(float(_num_param(param)))
    if kind == "table":
        return Table([_num_param(x) for x in spec["xs"]], [_num_param(y) for y in spec["ys"]])
    raise ValueError(f"unknown h kind {kind!r}")


def _num_param(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    return v


# --- precedence structures --------------------------------------------------

@dataclass(frozen=True)
class Dag:
    """Directed acyclic graph; edge ``(s, t)`` means ``s`` precedes ``t``."""

    nodes: tuple
    edges: frozenset = frozenset()

    def __post_init__(self):
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate DAG nodes")
        known = set(self.nodes)
        for s, t in self.edges:
            if s not in known or t not in known:
                raise ValueError(f"edge ({s}, {t}) uses an unknown node")


def gsp_compose(kind: str, g1, g2) -> Dag:
    """Series or parallel composition of two DAGs (a bare node counts as a one-node DAG)."""
    g1, g2 = _as_dag(g1), _as_dag(g2)
    if set(g1.nodes) & set(g2.nodes):
        raise ValueError("composition needs disjoint vertex sets")
    edges = set(g1.edges) | set(g2.edges)
    if kind == "series":
        edges |= {(u, v) for u in g1.nodes for v in g2.nodes}
    elif kind != "parallel":
        raise ValueError(f"unknown composition {kind!r}")
    return Dag(g1.nodes + g2.nodes, frozenset(edges))


def _as_dag(g) -> Dag:
    return g if isinstance(g, Dag) else Dag((g,))


@dataclass
class PrecedenceInstance:
    """Jobs ``0..n-1`` with precedence edges, processing times, weights and ``h``.

    ``w`` holds per-job weights; ``wA`` maps subset masks to weights. Exactly
    one of them is set.
    """

    p: list
    edges: list = field(default_factory=list)
    w: Optional[list] = None
    wA: Optional[dict] = None
    h: object = field(default_factory=Identity)
    labels: Optional[tuple] = None

    def __post_init__(self):
        n = len(self.p)
        if self.labels is None:
            self.labels = tuple(str(i + 1) for i in range(n))
        if (self.w is None) == (self.wA is None):
            raise ValueError("give exactly one of per-job weights w or subset weights wA")
        if any(x < 0 for x in self.p):
            raise ValueError("processing times must be nonnegative")
        weights = self.w if self.w is not None else list(self.wA.values())
        if any(x < 0 for x in weights):
            raise ValueError("negative weight")
        if not any(x > 0 for x in weights):
            raise ValueError("at least one weight must be positive")
        for s, t in self.edges:
            if not (0 <= s < n and 0 <= t < n) or s == t:
                raise ValueError(f"bad precedence edge ({s}, {t})")
        self.ancestors = ancestor_masks(n, self.edges)

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def mode(self) -> str:
        vals = list(self.p) + (list(self.w) if self.w is not None else list(self.wA.values()))
        if not self.h.exact or any(isinstance(v, float) for v in vals):
            return FLOAT
        return RATIONAL

    @property
    def ground(self) -> GroundSet:
        return GroundSet(self.labels)

    def closure(self, A: int) -> int:
        out = 0
        for j in bits(A):
            out |= self.ancestors[j]
        return out

    def is_feasible(self, order) -> bool:
        done = 0
        for j in order:
            if self.ancestors[j] & ~done & ~(1 << j):
                return False
            done |= 1 << j
        return True

    @classmethod
    def from_dag(cls, dag: Dag, p: dict, w: dict, h=None):
        """Build from a :class:`Dag` with per-node processing times and weights."""
        index = {v: i for i, v in enumerate(dag.nodes)}
        return cls(
            p=[p[v] for v in dag.nodes],
            edges=[(index[s], index[t]) for s, t in sorted(dag.edges, key=lambda e: (index[e[0]], index[e[1]]))],
            w=[w[v] for v in dag.nodes],
            h=h or Identity(),
            labels=tuple(str(v) for v in dag.nodes),
        )


def ancestor_masks(n: int, edges) -> list:
    """``anc[j]`` = mask of ``j`` and every job that must precede it."""
    ts = TopologicalSorter({j: set() for j in range(n)})
    for s, t in edges:
        ts.add(t, s)
    try:
        order = list(ts.static_order())
    except CycleError as exc:
        raise ValueError(f"precedence graph has a cycle: {exc.args[1]}") from None
    preds = [[] for _ in range(n)]
    for s, t in edges:
        preds[t].append(s)
    anc = [0] * n
    for j in order:
        m = 1 << j
        for s in preds[j]:
            m |= anc[s]
        anc[j] = m
    return anc


def topological_order(n: int, edges) -> list:
    """Kahn's algorithm taking the smallest available index first."""
    indeg = [0] * n
    succ = [[] for _ in range(n)]
    for s, t in edges:
        succ[s].append(t)
        indeg[t] += 1
    heap = [j for j in range(n) if indeg[j] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        j = heapq.heappop(heap)
        out.append(j)
        for t in succ[j]:
            indeg[t] -= 1
            if indeg[t] == 0:
                heapq.heappush(heap, t)
    if len(out) != n:
        raise ValueError("precedence graph has a cycle")
    return out


class ClosureCost(_Memo):
    """``A -> h(p(closure(A)))``."""

    kind = "dag"

    def __init__(self, inst: PrecedenceInstance, mode: str):
        super().__init__(inst.ground, mode, {"normalized", "nondecreasing", "submodular"})
        self.inst = inst
        self._p = [coerce(x, mode) for x in inst.p]
        self._zero = coerce(0, mode)

    def _eval(self, mask):
        c = self.inst.closure(mask)
        total = sum((self._p[j] for j in bits(c)), self._zero)
        return coerce(self.inst.h(total), self.mode)


class SubsetWeights(_Memo):
    """``A -> sum of w_B over the weighted sets B contained in A``."""

    kind = "subset_weights"

    def __init__(self, ground: GroundSet, weights: dict, mode: str = RATIONAL):
        if any(v < 0 for v in weights.values()):
            raise ValueError("negative subset weight")
        super().__init__(ground, mode, {"normalized", "nondecreasing", "supermodular"})
        self.weights = {int(m): coerce(v, mode) for m, v in weights.items() if m}
        self._zero = coerce(0, mode)

    def _eval(self, mask):
        return sum((w for B, w in self.weights.items() if B & ~mask == 0), self._zero)

    def _build_table(self):
        # zeta transform over subsets
        size = 1 << self.n
        t = [self._zero] * size
        for B, w in self.weights.items():
            t[B] += w
        for i in range(self.n):
            bit = 1 << i
            for m in range(size):
                if m & bit:
                    t[m] += t[m ^ bit]
        return t


class TreeCost(_Memo):
    """Expanding-search cost on a rooted tree: weight of the subtree spanning ``A`` and the root."""

    kind = "tree"

    def __init__(self, tree: "RootedTree", mode: str = RATIONAL):
        super().__init__(GroundSet(tuple(str(v) for v in tree.elements)), mode,
                         {"normalized", "nondecreasing", "submodular"})
        self.tree = tree
        self._cost = [coerce(c, mode) for c in tree.costs]
        self._zero = coerce(0, mode)

    def _eval(self, mask):
        u = 0
        for j in bits(mask):
            u |= self.tree.paths[j]
        return sum((self._cost[j] for j in bits(u)), self._zero)


def cost_oracle(inst: PrecedenceInstance, mode: Optional[str] = None) -> SetFunction:
    return ClosureCost(inst, mode or inst.mode)


def weight_oracle(inst: PrecedenceInstance, mode: Optional[str] = None) -> SetFunction:
    mode = mode or inst.mode
    if inst.w is not None:
        return ModularFunction(inst.ground, list(inst.w), mode)
    return SubsetWeights(inst.ground, inst.wA, mode)


def kuniform_weights(n: int, k: int) -> dict:
    """Equal weight ``1 / C(n, k)`` on every ``k``-subset."""
    if not 1 <= k <= n:
        raise ValueError("k-uniform weights need 1 <= k <= n")
    w = Fraction(1, math.comb(n, k))
    return {mask_of(c): w for c in combinations(range(n), k)}


def search_instance(inst: PrecedenceInstance, validate: bool = False) -> SearchInstance:
    mode = inst.mode
    return SearchInstance(cost_oracle(inst, mode), weight_oracle(inst, mode), validate=validate)


def smith_rule(p: Sequence, w: Sequence) -> tuple:
    """Jobs by ``w_j / p_j`` non-increasing, ties by index."""
    if any(x <= 0 for x in p):
        raise ValueError("Smith's rule needs positive processing times")
    key = [Fraction(wj) / Fraction(pj) if not isinstance(wj, float) and not isinstance(pj, float)
           else wj / pj for pj, wj in zip(p, w)]
    return tuple(sorted(range(len(p)), key=lambda j: (-key[j], j)))


def precedence_repair(order, inst: PrecedenceInstance) -> tuple:
    """Pull each job's unscheduled predecessors in front of it, in index-first topological order.

    Prefix closures of the result are the closures of the input's prefixes,
    so under a closure cost the search cost never increases.
    """
    topo = topological_order(inst.n, inst.edges)
    rank = {j: i for i, j in enumerate(topo)}
    out, done = [], 0
    for j in order:
        need = inst.ancestors[j] & ~done
        for k in sorted(bits(need), key=rank.__getitem__):
            out.append(k)
        done |= need
    return tuple(out)


def schedule(inst: PrecedenceInstance, method: str = "sidney", backend=None) -> CostReport:
    from .spd import spd_optimal_search

    sinst = search_instance(inst)
    if method == "sidney":
        rep = two_approx_search(sinst, backend)
    elif method in ("spd", "brute"):
        if method == "spd":
            order, cost = spd_optimal_search(sinst, backend=backend)
        else:
            order, cost = brute_force_optimal(sinst, backend=backend)
        rep = CostReport(order, cost, cost, coerce(1, sinst.mode), method)
    else:
        raise ValueError(f"unknown scheduling method {method!r}")
    order = precedence_repair(rep.order, inst)
    rep.order = order
    rep.cost = expected_cost(sinst, order)
    return rep


def dummy_job_reduction(inst: PrecedenceInstance) -> PrecedenceInstance:
    """Replace each weighted subset by a zero-length job that all its members precede."""
    if inst.wA is None:
        return inst
    n = inst.n
    p = list(inst.p)
    w = [0] * n
    edges = list(inst.edges)
    labels = list(inst.labels)
    for B, wB in sorted(inst.wA.items()):
        if wB == 0:
            continue
        d = len(p)
        p.append(0)
        w.append(wB)
        labels.append("d" + "".join(inst.labels[j] for j in bits(B)))
        edges.extend((j, d) for j in bits(B))
    return PrecedenceInstance(p=p, edges=edges, w=w, h=inst.h, labels=tuple(labels))


@dataclass
class RootedTree:
    """Rooted tree given by undirected weighted edges ``(u, v, cost)``.

    Elements are the non-root vertices, in the order their edges are listed.
    """

    root: object
    edges: list

    def __post_init__(self):
        adj = {}
        for u, v, c in self.edges:
            if not c > 0:
                raise ValueError("tree edge costs must be positive")
            adj.setdefault(u, []).append((v, c))
            adj.setdefault(v, []).append((u, c))
        if self.root not in adj and self.edges:
            raise ValueError("root is not a tree vertex")
        parent = {self.root: None}
        cost_to = {}
        stack = [self.root]
        while stack:
            u = stack.pop()
            for v, c in adj.get(u, []):
                if v not in parent:
                    parent[v] = u
                    cost_to[v] = c
                    stack.append(v)
        if len(parent) != len(adj) or len(self.edges) != len(adj) - 1:
            raise ValueError("edges do not form a connected tree")
        order = []
        for u, v, _ in self.edges:
            order.append(v if parent.get(v) == u else u)
        self.elements = tuple(order)
        index = {v: i for i, v in enumerate(order)}
        self.costs = [cost_to[v] for v in order]
        self.parent_index = [index.get(parent[v]) for v in order]
        paths = [0] * len(order)
        for i, v in enumerate(order):
            m, u = 0, v
            while u != self.root:
                m |= 1 << index[u]
                u = parent[u]
            paths[i] = m
        self.paths = paths

    @property
    def precedence_edges(self) -> list:
        return [(pi, i) for i, pi in enumerate(self.parent_index) if pi is not None]


def tree_cost_oracle(tree: RootedTree, mode: str = RATIONAL) -> SetFunction:
    return TreeCost(tree, mode)


def noprec_ratio(h, total=1):
    """``2 / (2 - kappa)`` with ``1 - kappa = h'(total) / h'(0)``.

    Tables use one-sided slopes; the limit form is also evaluated and a
    disagreement above 1e-6 is reported as a warning.
    """
    d0 = h.slope_at_zero()
    if d0 == 0:
        raise ValueError("h'(0) = 0: curvature ratio undefined")
    if d0 == math.inf:
        return 2.0
    d1 = h.slope_at(total)
    if isinstance(d0, float) or isinstance(d1, float):
        one_minus_kappa = d1 / d0
    else:
        one_minus_kappa = Fraction(d1) / Fraction(d0)
    if isinstance(h, Table):
        delta = total * 1e-7 if total else 1e-7
        limit = (h(total) - h(total - delta)) / h(delta)
        if abs(float(limit) - float(one_minus_kappa)) > 1e-6:
            warnings.warn(f"limit form {float(limit)} and derivative form {float(one_minus_kappa)} disagree")
    return 2 / (1 + one_minus_kappa)
