"""Kernel backend selection and exact table scaling.

The compiled ``_core`` extension is used when importable; otherwise (or when
``SUBSEARCH_PURE=1`` is set) the pure-Python twins in ``_pycore`` run.
Rational tables are scaled to integers over a common denominator so the
kernels stay exact; when the scaled values could overflow int64 the
pure-Python path runs on arbitrary-precision ints regardless of backend.
"""
from __future__ import annotations

import math
import os
from fractions import Fraction

import numpy as np

from . import _pycore
from .numeric import EPS, FLOAT

if os.environ.get("SUBSEARCH_PURE", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from . import _core as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_LIMIT = 1 << 62


def available_backends() -> list[str]:
    return ["cython", "python"] if _compiled is not None else ["python"]


def _module(backend):
    if backend is None:
        backend = BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        return _compiled
    if backend == "python":
        return _pycore
    raise ValueError(f"unknown backend {backend!r}")


class Table:
    """A set-function table ready for the kernels.

    ``values`` are Python ints (exact, real value = int / ``scale``) or
    floats (``scale`` = 1).
    """

    __slots__ = ("values", "scale", "exact", "maxabs")

    def __init__(self, values, scale, exact):
        self.values = values
        self.scale = scale
        self.exact = exact
        self.maxabs = max((abs(v) for v in values), default=0)

    @classmethod
    def build(cls, values, mode):
        if mode == FLOAT:
            return cls([float(v) for v in values], 1, False)
        fr = [Fraction(v) for v in values]
        den = 1
        for v in fr:
            den = math.lcm(den, v.denominator)
        return cls([v.numerator * (den // v.denominator) for v in fr], den, True)


def _prepare(values, exact, bound, backend):
    """Pick the kernel module and the array type for ``values``."""
    mod = _module(backend)
    if exact:
        if mod is _compiled and bound < _LIMIT:
            return mod, np.asarray(values, dtype=np.int64)
        return _pycore, values
    if mod is _compiled:
        return mod, np.asarray(values, dtype=np.float64)
    return _pycore, values


def _ftol(vals) -> float:
    return EPS * max(1.0, max((abs(v) for v in vals), default=0.0))


def structure_scan(table: Table, n: int, backend=None):
    tol = 0.0 if table.exact else _ftol(table.values)
    mod, arr = _prepare(table.values, table.exact, 4 * table.maxabs, backend)
    return mod.check_structure(arr, n, tol)


def shifted_argmax(G: Table, F: Table, lam, cand: int, backend=None):
    """Max of ``g - lam*f`` over subsets of ``cand`` and the union of maximizers."""
    if G.exact and F.exact and not isinstance(lam, float):
        lam = Fraction(lam)
        cg = lam.denominator * F.scale
        cf = lam.numerator * G.scale
        H = [cg * a - cf * b for a, b in zip(G.values, F.values)]
        bound = abs(cg) * G.maxabs + abs(cf) * F.maxabs
        mod, arr = _prepare(H, True, bound, backend)
        best, union = mod.argmax_union(arr, cand, 0.0)
        return Fraction(int(best), lam.denominator * F.scale * G.scale), union
    lam = float(lam)
    H = [a / G.scale - lam * (b / F.scale) for a, b in zip(G.values, F.values)]
    mod, arr = _prepare(H, False, 0, backend)
    best, union = mod.argmax_union(arr, cand, _ftol(H))
    return float(best), union


def min_connectivity(F: Table, G: Table, n: int, backend=None):
    """Minimum of ``d_f(B) - d_g(B)`` over proper nonempty B, and its tie-broken argmin."""
    if F.exact and G.exact:
        H = [G.scale * a - F.scale * b for a, b in zip(F.values, G.values)]
        bound = 3 * (G.scale * F.maxabs + F.scale * G.maxabs)
        mod, arr = _prepare(H, True, bound, backend)
        best, B = mod.min_connectivity(arr, n, 0.0)
        if best is None:
            return None, 0
        return Fraction(int(best), F.scale * G.scale), B
    H = [a / F.scale - b / G.scale for a, b in zip(F.values, G.values)]
    mod, arr = _prepare(H, False, 0, backend)
    best, B = mod.min_connectivity(arr, n, 3 * _ftol(H))
    return (None if best is None else float(best)), B


def _pair(G: Table, F: Table, n: int, backend):
    exact = G.exact and F.exact
    if exact:
        gv, fv = G.values, F.values
    else:
        gv = [v / G.scale for v in G.values]
        fv = [v / F.scale for v in F.values]
    bound = (n + 1) * 2 * G.maxabs * max(F.maxabs, 1) if exact else 0
    mod, garr = _prepare(gv, exact, bound, backend)
    farr = np.asarray(fv, dtype=garr.dtype) if isinstance(garr, np.ndarray) else fv
    scale = G.scale * F.scale if exact else 1
    return mod, garr, farr, scale, exact


def optimal_order(G: Table, F: Table, n: int, backend=None):
    """Exact optimum by subset DP and the lexicographically smallest optimal order."""
    mod, garr, farr, scale, exact = _pair(G, F, n, backend)
    R = mod.suffix_dp(garr, farr, n)
    if isinstance(R, np.ndarray):
        R = R.tolist()
    gv = garr.tolist() if isinstance(garr, np.ndarray) else garr
    fv = farr.tolist() if isinstance(farr, np.ndarray) else farr
    tol = 0 if exact else _ftol(R[:1]) * (n + 1)
    order, A = [], 0
    for _ in range(n):
        for s in range(n):
            B = A | (1 << s)
            if B == A:
                continue
            if (gv[B] - gv[A]) * fv[B] + R[B] <= R[A] + tol:
                order.append(s)
                A = B
                break
    cost = Fraction(int(R[0]), scale) if exact else float(R[0])
    return tuple(order), cost


def permutation_costs(G: Table, F: Table, n: int, backend=None):
    """Costs of all n! orders in lexicographic order, with their common scale.

    Exact mode returns integers whose real value is ``cost / scale``.
    """
    mod, garr, farr, scale, exact = _pair(G, F, n, backend)
    costs = mod.permutation_costs(garr, farr, n)
    return costs, scale, exact


def fictitious_play(M, iters: int, tol: float, check_every: int = 1000, backend=None):
    mod = _module(backend)
    M = np.ascontiguousarray(M, dtype=np.float64)
    return mod.fictitious_play(M, int(iters), float(tol), int(check_every))
