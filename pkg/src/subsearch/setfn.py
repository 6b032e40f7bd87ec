"""Set functions over a small ground set, encoded with bitmask subsets.

A :class:`SetFunction` maps a subset mask to a value. Concrete kinds are
tabular, modular and the derived wrappers (dual, contraction, restriction,
direct sum, composition with a concave ``h``). Derived wrappers keep an
index map back to their parent and memoize their evaluations.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import kernels
from .numeric import FLOAT, RATIONAL, EPS, bits, check_mode, coerce, lt, is_zero

MAX_N = 62
MAX_VERIFY_N = 20
MAX_TABLE_N = 24

FLAGS = ("normalized", "nondecreasing", "submodular", "supermodular", "modular")


class CapacityError(ValueError):
    """The ground set is too large for an exhaustive routine."""

    def __init__(self, what: str, n: int, limit: int):
        super().__init__(f"{what} needs n <= {limit}, got n = {n}")
        self.n = n
        self.limit = limit


class MaskError(ValueError):
    pass


@dataclass(frozen=True)
class GroundSet:
    labels: tuple

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if not 1 <= len(labels) <= MAX_N:
            raise ValueError(f"ground set size must be in 1..{MAX_N}, got {len(labels)}")
        if len(set(labels)) != len(labels):
            raise ValueError("ground set labels must be unique")

    @classmethod
    def of_size(cls, n: int) -> "GroundSet":
        return cls(tuple(str(i + 1) for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def index(self, item) -> int:
        """Element index of a label, or of an int index passed through."""
        if isinstance(item, int) and not isinstance(item, bool):
            if not 0 <= item < self.n:
                raise MaskError(f"element index {item} out of range for n={self.n}")
            return item
        try:
            return self.labels.index(str(item))
        except ValueError:
            raise MaskError(f"unknown element label {item!r}") from None

    def mask(self, items: Iterable) -> int:
        m = 0
        for it in items:
            m |= 1 << self.index(it)
        return m

    def names(self, mask: int) -> list:
        return [self.labels[i] for i in bits(mask)]

    def sub(self, mask: int) -> "GroundSet":
        return GroundSet(tuple(self.labels[i] for i in bits(mask)))


def expansions(index_map: Sequence[int]) -> list:
    """``out[m]`` = parent mask of local mask ``m`` for every local mask."""
    k = len(index_map)
    out = [0] * (1 << k)
    for m in range(1, 1 << k):
        low = m & -m
        out[m] = out[m ^ low] | (1 << index_map[low.bit_length() - 1])
    return out


def expand(mask: int, index_map: Sequence[int]) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << index_map[i]
    return out


class SetFunction:
    """Value oracle ``mask -> value`` on a :class:`GroundSet`.

    ``props`` are declared structural flags; :func:`verify_structure`
    checks them. Instances are immutable after construction.
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet, mode: str = RATIONAL, props: Iterable[str] = ()):
        self.ground = ground
        self.mode = check_mode(mode)
        props = frozenset(props)
        unknown = props - set(FLAGS)
        if unknown:
            raise ValueError(f"unknown property flags {sorted(unknown)}")
        if "modular" in props:
            props |= {"submodular", "supermodular"}
        self.props = props
        self._table = None
        self._ktable = None

    @property
    def n(self) -> int:
        return self.ground.n

    @property
    def full(self) -> int:
        return self.ground.full

    def __call__(self, mask: int):
        if mask < 0 or mask >> self.n:
            raise MaskError(f"mask {mask:#x} has bits outside 0..{self.n - 1}")
        if self._table is not None:
            return self._table[mask]
        return self._eval(mask)

    def _eval(self, mask: int):
        raise NotImplementedError

    def of(self, items: Iterable):
        """Evaluate at a collection of labels or indices."""
        return self(self.ground.mask(items))

    def singleton(self, i: int):
        return self(1 << i)

    def table(self) -> list:
        """All 2^n values indexed by mask (cached)."""
        if self._table is None:
            if self.n > MAX_TABLE_N:
                raise CapacityError("tabulation", self.n, MAX_TABLE_N)
            self._table = self._build_table()
        return self._table

    def _build_table(self) -> list:
        return [self._eval(m) for m in range(1 << self.n)]

    def ktable(self) -> kernels.Table:
        if self._ktable is None:
            self._ktable = kernels.Table.build(self.table(), self.mode)
        return self._ktable

    def has(self, flag: str) -> bool:
        return flag in self.props

    def __repr__(self):
        return f"<{type(self).__name__} n={self.n} mode={self.mode}>"


class TabularFunction(SetFunction):
    kind = "tabular"

    def __init__(self, ground, values, mode=RATIONAL, props=()):
        super().__init__(ground, mode, props)
        if len(values) != 1 << ground.n:
            raise ValueError(f"tabular oracle needs {1 << ground.n} values, got {len(values)}")
        self._table = [coerce(v, mode) for v in values]

    def _eval(self, mask):
        return self._table[mask]


class ModularFunction(SetFunction):
    kind = "modular"

    def __init__(self, ground, weights, mode=RATIONAL):
        if len(weights) != ground.n:
            raise ValueError(f"modular oracle needs {ground.n} weights, got {len(weights)}")
        self.weights = tuple(coerce(w, mode) for w in weights)
        props = {"normalized", "modular"}
        if all(w >= 0 for w in self.weights):
            props.add("nondecreasing")
        super().__init__(ground, mode, props)

    def _eval(self, mask):
        return sum((self.weights[i] for i in bits(mask)), coerce(0, self.mode))

    def _build_table(self):
        out = [coerce(0, self.mode)] * (1 << self.n)
        for m in range(1, 1 << self.n):
            low = m & -m
            out[m] = out[m ^ low] + self.weights[low.bit_length() - 1]
        return out


class _Memo(SetFunction):
    """Derived oracle with a per-mask memo; concurrent writers store identical values."""

    def __init__(self, ground, mode, props):
        super().__init__(ground, mode, props)
        self._memo = {}

    def __call__(self, mask):
        if self._table is not None:
            return self._table[mask]
        try:
            return self._memo[mask]
        except KeyError:
            if mask < 0 or mask >> self.n:
                raise MaskError(f"mask {mask:#x} has bits outside 0..{self.n - 1}") from None
            v = self._memo[mask] = self._eval(mask)
            return v


class DualFunction(_Memo):
    kind = "dual"

    def __init__(self, g: SetFunction):
        props = {"normalized"} & g.props
        if "nondecreasing" in g.props:
            props.add("nondecreasing")
        if "submodular" in g.props:
            props.add("supermodular")
        if "supermodular" in g.props:
            props.add("submodular")
        super().__init__(g.ground, g.mode, props)
        self.base = g
        self._total = g(g.full)

    def _eval(self, mask):
        return self._total - self.base(self.full ^ mask)

    def _build_table(self):
        t = self.base.table()
        full = self.full
        return [self._total - t[full ^ m] for m in range(full + 1)]


class ContractedFunction(_Memo):
    """``B -> f(A | B) - f(A)`` on the complement of ``A``, re-indexed."""

    kind = "contraction"

    def __init__(self, f: SetFunction, A: int):
        rest = f.full & ~A
        if rest == 0:
            raise ValueError("contraction by the whole ground set leaves an empty ground set")
        props = f.props & {"submodular", "supermodular", "modular", "nondecreasing"}
        super().__init__(f.ground.sub(rest), f.mode, props | {"normalized"})
        self.base = f
        self.A = A
        self.index_map = tuple(bits(rest))
        self._fA = f(A)

    def _eval(self, mask):
        return self.base(self.A | expand(mask, self.index_map)) - self._fA

    def _build_table(self):
        t = self.base.table()
        A, fA = self.A, self._fA
        return [t[A | e] - fA for e in expansions(self.index_map)]


class RestrictedFunction(_Memo):
    """``f`` on the subsets of ``A``, re-indexed."""

    kind = "restriction"

    def __init__(self, f: SetFunction, A: int):
        if A == 0:
            raise ValueError("restriction to the empty set")
        super().__init__(f.ground.sub(A), f.mode, f.props)
        self.base = f
        self.index_map = tuple(bits(A))

    def _eval(self, mask):
        return self.base(expand(mask, self.index_map))

    def _build_table(self):
        if self.n == self.base.n:
            return list(self.base.table())
        if self.base._table is None and self.base.n > MAX_TABLE_N:
            return [self._eval(m) for m in range(1 << self.n)]
        t = self.base.table()
        return [t[e] for e in expansions(self.index_map)]


class DirectSumFunction(_Memo):
    kind = "direct_sum"

    def __init__(self, f1: SetFunction, f2: SetFunction, embed1: Sequence[int], embed2: Sequence[int],
                 ground: GroundSet):
        if f1.mode != f2.mode:
            raise ValueError("direct sum of oracles in different arithmetic modes")
        if set(embed1) & set(embed2):
            raise ValueError("direct sum needs disjoint ground sets")
        if sorted(list(embed1) + list(embed2)) != list(range(ground.n)):
            raise ValueError("embeddings must partition the combined ground set")
        super().__init__(ground, f1.mode, f1.props & f2.props)
        self.parts = ((f1, tuple(embed1)), (f2, tuple(embed2)))

    def _eval(self, mask):
        total = coerce(0, self.mode)
        for f, emb in self.parts:
            local = 0
            for i, e in enumerate(emb):
                if mask >> e & 1:
                    local |= 1 << i
            total += f(local)
        return total


class ComposedFunction(_Memo):
    """``A -> h(inner(A))`` for a nondecreasing concave ``h`` with ``h(0) = 0``."""

    kind = "h_of"

    def __init__(self, h, inner: SetFunction):
        mode = RATIONAL if getattr(h, "exact", False) and inner.mode == RATIONAL else FLOAT
        props = {"normalized", "nondecreasing"} & inner.props
        if {"modular", "nondecreasing"} <= inner.props:
            props.add("submodular")
        super().__init__(inner.ground, mode, props)
        self.h = h
        self.inner = inner

    def _eval(self, mask):
        return coerce(self.h(self.inner(mask)), self.mode)


class FunctionOracle(_Memo):
    """Oracle backed by an arbitrary pure callable on masks."""

    kind = "callable"

    def __init__(self, ground, fn: Callable[[int], object], mode=RATIONAL, props=()):
        super().__init__(ground, mode, props)
        self._fn = fn

    def _eval(self, mask):
        return coerce(self._fn(mask), self.mode)


class FloatView(_Memo):
    """Float-mode view of a rational oracle, for mixing into float instances."""

    def __init__(self, f: SetFunction):
        super().__init__(f.ground, FLOAT, f.props)
        self.base = f
        self.kind = f.kind

    def _eval(self, mask):
        return float(self.base(mask))

    def _build_table(self):
        return [float(v) for v in self.base.table()]


def as_mode(f: SetFunction, mode: str) -> SetFunction:
    if f.mode == mode:
        return f
    if mode == FLOAT:
        return FloatView(f)
    raise ValueError("cannot convert a float oracle to rational mode")


def dual(g: SetFunction) -> SetFunction:
    if isinstance(g, DualFunction):
        return g.base
    return DualFunction(g)


def contract(f: SetFunction, A: int) -> SetFunction:
    if A == 0:
        return f
    return ContractedFunction(f, A)


def restrict(f: SetFunction, A: int) -> SetFunction:
    if A == f.full:
        return f
    return RestrictedFunction(f, A)


def direct_sum(f1: SetFunction, f2: SetFunction, embed1=None, embed2=None,
               ground: Optional[GroundSet] = None) -> SetFunction:
    """``(f1 + f2)(A) = f1(A & S1) + f2(A & S2)`` on the combined ground set.

    Without embeddings the ground sets are concatenated, ``f1`` first.
    """
    if embed1 is None and embed2 is None:
        embed1 = tuple(range(f1.n))
        embed2 = tuple(range(f1.n, f1.n + f2.n))
    if ground is None:
        labels = [None] * (f1.n + f2.n)
        for f, emb in ((f1, embed1), (f2, embed2)):
            for i, e in enumerate(emb):
                labels[e] = f.ground.labels[i]
        if len(set(labels)) != len(labels):
            labels = [str(i + 1) for i in range(len(labels))]
        ground = GroundSet(tuple(labels))
    if isinstance(f1, ModularFunction) and isinstance(f2, ModularFunction):
        w = [None] * ground.n
        for f, emb in ((f1, embed1), (f2, embed2)):
            for i, e in enumerate(emb):
                w[e] = f.weights[i]
        if set(embed1) & set(embed2):
            raise ValueError("direct sum needs disjoint ground sets")
        return ModularFunction(ground, w, f1.mode)
    return DirectSumFunction(f1, f2, embed1, embed2, ground)


@dataclass
class StructureReport:
    normalized: bool
    nondecreasing: bool
    submodular: bool
    supermodular: bool
    modular: bool
    witnesses: dict = field(default_factory=dict)

    def holds(self, flag: str) -> bool:
        return getattr(self, flag)


def verify_structure(f: SetFunction, backend=None) -> StructureReport:
    """Exhaustively decide the structural flags of ``f`` (n <= 20).

    Witnesses are element-index tuples: ``nondecreasing -> (A, s)``,
    ``submodular``/``supermodular`` -> ``(A, s, t)`` where the marginal
    of ``s`` and ``t`` at ``A`` break the inequality.
    """
    if f.n > MAX_VERIFY_N:
        raise CapacityError("exhaustive structure verification", f.n, MAX_VERIFY_N)
    normalized, mono, sub, sup = kernels.structure_scan(f.ktable(), f.n, backend)
    wit = {}
    if not normalized:
        wit["normalized"] = (0,)
    if mono is not None:
        wit["nondecreasing"] = mono
    if sub is not None:
        wit["submodular"] = sub
    if sup is not None:
        wit["supermodular"] = sup
    return StructureReport(
        normalized=normalized,
        nondecreasing=mono is None,
        submodular=sub is None,
        supermodular=sup is None,
        modular=sub is None and sup is None,
        witnesses=wit,
    )


def curvature(f: SetFunction):
    """Total curvature ``1 - min_s (f(S) - f(S-s)) / f(s)``."""
    full = f.full
    fS = f(full)
    best = None
    for s in range(f.n):
        fs = f(1 << s)
        if is_zero(fs) or fs < 0:
            raise ValueError(f"curvature needs f(s) > 0; element {f.ground.labels[s]} has {fs}")
        r = (fS - f(full ^ (1 << s))) / fs
        if best is None or lt(r, best):
            best = r
    kappa = 1 - best
    if isinstance(kappa, float) and abs(kappa) <= EPS:
        kappa = 0.0
    return kappa


@dataclass(frozen=True)
class CurvatureReport:
    kappa_f: object
    kappa_gsharp: object
    theta: object


def curvature_report(f: SetFunction, g: SetFunction) -> CurvatureReport:
    kf = curvature(f)
    kg = curvature(dual(g))
    return CurvatureReport(kf, kg, (1 - kf) * (1 - kg))


def base_polyhedron_vertex(f: SetFunction, order: Sequence[int]) -> list:
    """Greedy vertex ``x_j = f(S_j) - f(S_j - j)`` along ``order``."""
    if sorted(order) != list(range(f.n)):
        raise ValueError("order must be a permutation of the ground set")
    x = [None] * f.n
    A = 0
    prev = f(0)
    for j in order:
        A |= 1 << j
        cur = f(A)
        x[j] = cur - prev
        prev = cur
    return x


def in_base_polyhedron(f: SetFunction, x: Sequence, scale=1):
    """Check ``x(A) <= f(A)/scale`` for all A and ``x(S) = f(S)/scale``.

    Returns ``(ok, witness_mask)``; witness is ``None`` when ok and the full
    mask when only the equality fails.
    """
    if f.n > MAX_VERIFY_N:
        raise CapacityError("base polyhedron membership", f.n, MAX_VERIFY_N)
    t = f.table()
    xs = [0] * (1 << f.n)
    for m in range(1, 1 << f.n):
        low = m & -m
        xs[m] = xs[m ^ low] + x[low.bit_length() - 1]
    for m in range(1, 1 << f.n):
        if lt(t[m] / scale if scale != 1 else t[m], xs[m]):
            return False, m
    full = f.full
    total = t[full] / scale if scale != 1 else t[full]
    if lt(xs[full], total) or lt(total, xs[full]):
        return False, full
    return True, None


def coverage_function(ground: GroundSet, covers: Sequence[Iterable[int]], item_weights: Sequence,
                      mode=RATIONAL) -> SetFunction:
    """Weighted coverage ``A -> w(union of covers[a] for a in A)``; monotone submodular."""
    cover_masks = [0] * ground.n
    for i, items in enumerate(covers):
        for it in items:
            cover_masks[i] |= 1 << it
    w = [coerce(v, mode) for v in item_weights]
    zero = coerce(0, mode)

    def value(mask):
        u = 0
        for i in bits(mask):
            u |= cover_masks[i]
        return sum((w[k] for k in bits(u)), zero)

    return FunctionOracle(ground, value, mode, {"normalized", "nondecreasing", "submodular"})
