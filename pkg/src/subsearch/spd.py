"""Series-parallel decomposition and the exact optimal search it yields."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from . import kernels
from .density import SearchInstance, max_density_subset
from .numeric import bits, eq, is_zero
from .setfn import CapacityError, SetFunction, dual, expand
from .sidney import expected_cost

MAX_SEPARATOR_N = 20

F_INITIAL = "f-initial"
GSHARP_INITIAL = "g#-initial"


class NotDecomposableError(ValueError):
    def __init__(self, elements: list):
        super().__init__(f"no f-initial set, g#-initial complement or separator on {elements}")
        self.elements = elements


def closure(f: SetFunction, A: int) -> int:
    """Largest superset of ``A`` with the same ``f`` value.

    One pass suffices for monotone submodular ``f``: two zero-marginal
    elements are jointly zero-marginal.
    """
    fA = f(A)
    out = A
    for s in range(f.n):
        bit = 1 << s
        if not A & bit and eq(f(A | bit), fA):
            out |= bit
    return out


def find_f_initial(f: SetFunction) -> Optional[int]:
    """First nonempty largest f-initial set avoiding some element, scanning elements by index."""
    full = f.full
    cl = [closure(f, 1 << t) for t in range(f.n)]
    for s in range(f.n):
        T = cl[s] & ~(1 << s)
        examined = 0
        while T:
            todo = full & ~T & ~examined
            if not todo:
                break
            t = (todo & -todo).bit_length() - 1
            examined |= 1 << t
            T &= cl[t]
        if T:
            return T
    return None


def is_f_initial(f: SetFunction, I: int) -> bool:
    if I == 0 or I == f.full:
        return False
    for t in bits(f.full & ~I):
        if I & ~closure(f, 1 << t):
            return False
    return True


def connectivity(f: SetFunction, B: int):
    return f(B) + f(f.full ^ B) - f(f.full)


def find_separator(f: SetFunction, g: SetFunction, backend=None) -> Optional[int]:
    """A set splitting both ``f`` and ``g`` as direct sums, or ``None``.

    Minimizes the connectivity of ``f - g`` by enumeration; among zero
    connectivity sets the smallest, then lowest-mask, one is returned.
    """
    if f.n > MAX_SEPARATOR_N:
        raise CapacityError("separator enumeration", f.n, MAX_SEPARATOR_N)
    if f.n < 2:
        return None
    best, B = kernels.min_connectivity(f.ktable(), g.ktable(), f.n, backend)
    if best is not None and is_zero(best):
        return B
    return None


@dataclass
class Leaf:
    element: int
    mask: int
    instance: SearchInstance = field(repr=False, compare=False, default=None)


@dataclass
class Series:
    first: "SPDTree"
    rest: "SPDTree"
    origin: str
    initial: int
    mask: int
    instance: SearchInstance = field(repr=False, compare=False, default=None)


@dataclass
class Parallel:
    left: "SPDTree"
    right: "SPDTree"
    separator: int
    mask: int
    instance: SearchInstance = field(repr=False, compare=False, default=None)


@dataclass
class NotDecomposable:
    mask: int
    instance: SearchInstance = field(repr=False, compare=False, default=None)


SPDTree = Union[Leaf, Series, Parallel]

POLICIES = ("series-first", "parallel-first")


def _series_split(inst: SearchInstance):
    I = find_f_initial(inst.f)
    if I is not None:
        return I, F_INITIAL
    J = find_f_initial(dual(inst.g))
    if J is not None:
        return inst.full & ~J, GSHARP_INITIAL
    return None, None


def _split(inst: SearchInstance, policy: str, backend):
    """The decomposition step at ``inst``: ``("series", I, origin)``, ``("parallel", B)`` or None."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    steps = ("series", "parallel") if policy == "series-first" else ("parallel", "series")
    for step in steps:
        if step == "series":
            I, origin = _series_split(inst)
            if I is not None:
                return "series", I, origin
        else:
            B = find_separator(inst.f, inst.g, backend)
            if B is not None:
                return "parallel", B, None
    return None


def spd_decompose(inst: SearchInstance, policy: str = "series-first", backend=None):
    """Decomposition tree, or a :class:`NotDecomposable` naming the stuck subset."""
    return _decompose(inst, tuple(range(inst.n)), policy, backend)


def _decompose(inst, index_map, policy, backend):
    mask = expand(inst.full, index_map)
    if inst.n == 1:
        return Leaf(index_map[0], mask, inst)
    step = _split(inst, policy, backend)
    if step is None:
        return NotDecomposable(mask, inst)
    kind, X, origin = step
    rest = inst.full & ~X
    map_x = tuple(index_map[i] for i in bits(X))
    map_rest = tuple(index_map[i] for i in bits(rest))
    if kind == "series":
        first = _decompose(inst.restrict(X), map_x, policy, backend)
        second = _decompose(inst.contract(X), map_rest, policy, backend)
        if isinstance(first, NotDecomposable):
            return first
        if isinstance(second, NotDecomposable):
            return second
        return Series(first, second, origin, expand(X, index_map), mask, inst)
    left = _decompose(inst.restrict(X), map_x, policy, backend)
    right = _decompose(inst.restrict(rest), map_rest, policy, backend)
    if isinstance(left, NotDecomposable):
        return left
    if isinstance(right, NotDecomposable):
        return right
    return Parallel(left, right, expand(X, index_map), mask, inst)


def spd_optimal_search(inst: SearchInstance, policy: str = "series-first", backend=None):
    """Exact optimal order of a series-parallel decomposable instance and its cost."""
    order = _solve(inst, tuple(range(inst.n)), policy, backend)
    return order, expected_cost(inst, order)


def _solve(inst, index_map, policy, backend) -> tuple:
    if inst.n == 1:
        return (index_map[0],)
    step = _split(inst, policy, backend)
    if step is None:
        raise NotDecomposableError(inst.ground.names(inst.full))
    kind, X, _ = step
    if kind == "series":
        A = X
    else:
        M = max_density_subset(inst, backend).set
        A = M & X if M & X else M & ~X
    rest = inst.full & ~A
    head = _solve(inst.restrict(A), tuple(index_map[i] for i in bits(A)), policy, backend)
    tail = _solve(inst.contract(A), tuple(index_map[i] for i in bits(rest)), policy, backend)
    return head + tail


def tree_to_json(node, labels) -> dict:
    """Nested JSON form of a decomposition tree with element labels."""
    names = [labels[i] for i in bits(node.mask)]
    if isinstance(node, Leaf):
        return {"kind": "leaf", "element": labels[node.element]}
    if isinstance(node, Series):
        return {
            "kind": "series",
            "origin": node.origin,
            "set": names,
            "initial": [labels[i] for i in bits(node.initial)],
            "first": tree_to_json(node.first, labels),
            "rest": tree_to_json(node.rest, labels),
        }
    if isinstance(node, Parallel):
        return {
            "kind": "parallel",
            "set": names,
            "separator": [labels[i] for i in bits(node.separator)],
            "left": tree_to_json(node.left, labels),
            "right": tree_to_json(node.right, labels),
        }
    return {"kind": "not_decomposable", "set": names}
