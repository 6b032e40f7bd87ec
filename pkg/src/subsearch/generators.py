"""Seeded random instance families used by tests, benchmarks and ``subsearch gen``."""
from __future__ import annotations

import random
from fractions import Fraction

from .density import SearchInstance
from .numeric import RATIONAL
from .sched import Dag, PrecedenceInstance, RootedTree, Table, gsp_compose, kuniform_weights, tree_cost_oracle
from .setfn import ComposedFunction, GroundSet, ModularFunction, SetFunction, TabularFunction, coverage_function, dual

FAMILIES = ("coverage", "concave_modular", "modular", "tree", "gsp", "kuniform")


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def coverage(n: int, seed=None, items: int | None = None, max_weight: int = 5) -> SetFunction:
    """Weighted coverage of a random universe; every element covers at least one item."""
    rng = _rng(seed)
    items = items or max(2, n + 1)
    covers = []
    for _ in range(n):
        c = {rng.randrange(items)}
        c |= {k for k in range(items) if rng.random() < 0.35}
        covers.append(sorted(c))
    weights = [rng.randint(1, max_weight) for _ in range(items)]
    f = coverage_function(GroundSet.of_size(n), covers, weights, RATIONAL)
    return TabularFunction(f.ground, f.table(), RATIONAL, f.props)


def private_coverage(n: int, seed=None, shared: int = 2, private_weight: int = 6) -> SetFunction:
    """Coverage where each element owns a heavy private item; curvature stays small."""
    rng = _rng(seed)
    covers = [[shared + s] + [k for k in range(shared) if rng.random() < 0.5] for s in range(n)]
    weights = [1] * shared + [rng.randint(private_weight // 2 + 1, private_weight) for _ in range(n)]
    f = coverage_function(GroundSet.of_size(n), covers, weights, RATIONAL)
    return TabularFunction(f.ground, f.table(), RATIONAL, f.props)


def dual_coverage(n: int, seed=None, **kw) -> SetFunction:
    """Dual of a coverage function: nondecreasing supermodular with ``g(A) < g(S)`` for proper ``A``."""
    g = dual(coverage(n, seed, **kw))
    return TabularFunction(g.ground, g.table(), RATIONAL, g.props)


def coverage_instance(n: int, seed=None) -> SearchInstance:
    rng = _rng(seed)
    return SearchInstance(coverage(n, rng), dual_coverage(n, rng))


def concave_modular(n: int, seed=None, max_weight: int = 5) -> SetFunction:
    """``h(w(A))`` for random integer ``w`` and a random concave piecewise-linear ``h``."""
    rng = _rng(seed)
    w = [rng.randint(1, max_weight) for _ in range(n)]
    total = sum(w)
    knots = sorted(set(rng.sample(range(1, total + 1), min(3, total))) | {total})
    slopes = sorted((Fraction(rng.randint(1, 6), rng.randint(1, 3)) for _ in knots), reverse=True)
    xs, ys = [0], [Fraction(0)]
    for k, s in zip(knots, slopes):
        ys.append(ys[-1] + s * (k - xs[-1]))
        xs.append(k)
    f = ComposedFunction(Table(xs, ys), ModularFunction(GroundSet.of_size(n), w, RATIONAL))
    return TabularFunction(f.ground, f.table(), RATIONAL, f.props)


def concave_modular_instance(n: int, seed=None) -> SearchInstance:
    rng = _rng(seed)
    return SearchInstance(concave_modular(n, rng), dual_coverage(n, rng))


def modular_pair(n: int, seed=None, max_weight: int = 9) -> SearchInstance:
    rng = _rng(seed)
    ground = GroundSet.of_size(n)
    f = ModularFunction(ground, [rng.randint(1, max_weight) for _ in range(n)])
    g = ModularFunction(ground, [rng.randint(1, max_weight) for _ in range(n)])
    return SearchInstance(f, g)


def random_tree(n: int, seed=None, max_cost: int = 5) -> RootedTree:
    """Random recursive tree with ``n`` edges; vertex ``k`` attaches to a uniform earlier vertex."""
    rng = _rng(seed)
    edges = []
    for v in range(1, n + 1):
        u = rng.randrange(v)
        edges.append(("r" if u == 0 else str(u), str(v), rng.randint(1, max_cost)))
    return RootedTree("r", edges)


def tree_instance(n: int, seed=None, max_weight: int = 9) -> SearchInstance:
    rng = _rng(seed)
    tree = random_tree(n, rng)
    f = tree_cost_oracle(tree)
    g = ModularFunction(f.ground, [rng.randint(1, max_weight) for _ in range(n)])
    return SearchInstance(f, g)


def random_gsp(n: int, seed=None) -> Dag:
    """Generalized series-parallel DAG on nodes ``1..n`` built by random compositions."""
    rng = _rng(seed)
    parts = [Dag((str(i),)) for i in range(1, n + 1)]
    while len(parts) > 1:
        i = rng.randrange(len(parts) - 1)
        kind = rng.choice(("series", "parallel"))
        parts[i:i + 2] = [gsp_compose(kind, parts[i], parts[i + 1])]
    return parts[0]


def gsp_instance(n: int, seed=None, max_p: int = 5, max_w: int = 5) -> PrecedenceInstance:
    rng = _rng(seed)
    dag = random_gsp(n, rng)
    p = {v: rng.randint(1, max_p) for v in dag.nodes}
    w = {v: rng.randint(1, max_w) for v in dag.nodes}
    return PrecedenceInstance.from_dag(dag, p, w)


def kuniform_instance(n: int, k: int = 2, seed=None, max_p: int = 5) -> PrecedenceInstance:
    rng = _rng(seed)
    return PrecedenceInstance(p=[rng.randint(1, max_p) for _ in range(n)], wA=kuniform_weights(n, k))


def sparse_subset_instance(n: int, seed=None, sets: int = 3, max_p: int = 4, max_w: int = 4) -> PrecedenceInstance:
    """Random precedence-free instance with a few weighted subsets."""
    rng = _rng(seed)
    full = (1 << n) - 1
    wA = {}
    while not wA:
        for _ in range(sets):
            m = rng.randint(1, full)
            wA[m] = wA.get(m, 0) + rng.randint(1, max_w)
    edges = [(s, t) for s in range(n) for t in range(s + 1, n) if rng.random() < 0.2]
    return PrecedenceInstance(p=[rng.randint(1, max_p) for _ in range(n)], edges=edges, wA=wA)
