"""Search instances, search density and maximum-density subsets."""
from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .numeric import FLOAT, RATIONAL, is_zero, lt, ratio
from .setfn import (
    MAX_VERIFY_N,
    CapacityError,
    SetFunction,
    as_mode,
    contract,
    restrict,
    verify_structure,
)

MAX_ENUM_N = 20


class InstanceError(ValueError):
    """An instance violates the standing assumptions; ``witness`` names the offending set."""

    def __init__(self, check: str, message: str, witness=None):
        super().__init__(message)
        self.check = check
        self.witness = witness


@dataclass(frozen=True)
class Violation:
    check: str
    message: str
    witness: object = None


class SearchInstance:
    """A cost function ``f`` and weight function ``g`` on one ground set.

    Standing assumptions (checked by :meth:`validate`): ``f`` nondecreasing
    submodular, ``g`` nondecreasing supermodular, both normalized,
    ``f(A) > 0`` for nonempty ``A`` and ``g(A) < g(S)`` for proper ``A``.
    A rational oracle paired with a float one is viewed in float mode.
    """

    def __init__(self, f: SetFunction, g: SetFunction, validate: bool = True):
        if f.n != g.n:
            raise ValueError(f"f and g have different ground sets (n={f.n} vs n={g.n})")
        mode = FLOAT if FLOAT in (f.mode, g.mode) else RATIONAL
        self.f = as_mode(f, mode)
        self.g = as_mode(g, mode)
        self.mode = mode
        if validate:
            self.validate()

    @property
    def ground(self):
        return self.f.ground

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def full(self) -> int:
        return self.f.full

    def violations(self, exhaustive: bool = True) -> list:
        """All standing-assumption violations, each with a witness."""
        f, g, out = self.f, self.g, []
        names = self.ground.names
        if exhaustive and self.n <= MAX_VERIFY_N:
            rf, rg = verify_structure(f), verify_structure(g)
            for flag in ("normalized", "nondecreasing", "submodular"):
                if not rf.holds(flag):
                    out.append(Violation(f"f.{flag}", f"f is not {flag}", _witness(rf, flag, names)))
            for flag in ("normalized", "nondecreasing", "supermodular"):
                if not rg.holds(flag):
                    out.append(Violation(f"g.{flag}", f"g is not {flag}", _witness(rg, flag, names)))
        else:
            if not is_zero(f(0)):
                out.append(Violation("f.normalized", "f(empty) != 0", []))
            if not is_zero(g(0)):
                out.append(Violation("g.normalized", "g(empty) != 0", []))
        for s in range(self.n):
            if not lt(0, f(1 << s)):
                out.append(Violation("f.positive", f"f({{{self.ground.labels[s]}}}) <= 0", names(1 << s)))
        gS = g(self.full)
        for s in range(self.n):
            A = self.full ^ (1 << s)
            if not lt(g(A), gS):
                out.append(Violation("g.below_total", "g(A) = g(S) for a proper subset A", names(A)))
        return out

    def validate(self):
        bad = self.violations()
        if bad:
            v = bad[0]
            raise InstanceError(v.check, v.message, v.witness)
        return self

    def contract(self, A: int) -> "SearchInstance":
        return SearchInstance(contract(self.f, A), contract(self.g, A), validate=False)

    def restrict(self, A: int) -> "SearchInstance":
        return SearchInstance(restrict(self.f, A), restrict(self.g, A), validate=False)

    def __repr__(self):
        return f"<SearchInstance n={self.n} mode={self.mode}>"


def _witness(report, flag, names):
    w = report.witnesses.get(flag)
    if w is None:
        return None
    if flag == "normalized":
        return []
    A, *elems = w
    return {"set": names(A), "elements": [names(1 << e)[0] for e in elems]}


@dataclass(frozen=True)
class DensityResult:
    set: int
    rho: object
    maximal: bool = True
    rounds: int = 0


def density(inst: SearchInstance, A: int):
    """``g(A) / f(A)`` for nonempty ``A``."""
    if A == 0:
        raise ValueError("density of the empty set is not defined here")
    return ratio(inst.g(A), inst.f(A))


def maximize_shifted(inst: SearchInstance, lam, within: int | None = None, backend=None) -> int:
    """The union of all maximizers of ``g - lam*f`` over subsets of ``within``.

    Maximizers of a supermodular function form a lattice, so the union is
    itself the unique maximal maximizer.
    """
    if inst.n > MAX_ENUM_N:
        raise CapacityError("enumeration backend for g - lambda f", inst.n, MAX_ENUM_N)
    cand = inst.full if within is None else within
    _, union = kernels.shifted_argmax(inst.g.ktable(), inst.f.ktable(), lam, cand, backend)
    return union


def max_density_subset(inst: SearchInstance, backend=None) -> DensityResult:
    """The largest set of maximum density, with its density.

    Starting from ``S``, repeatedly replace the candidate by the maximal
    maximizer of ``g - rho(candidate) f`` inside it until the candidate is
    its own maximizer. Each round strictly shrinks the candidate.
    """
    cand = inst.full
    rounds = 0
    while True:
        rounds += 1
        lam = density(inst, cand)
        A = maximize_shifted(inst, lam, cand, backend)
        if A == cand:
            return DensityResult(cand, lam, True, rounds)
        if A == 0 or A & ~cand:
            raise RuntimeError("density iteration left the candidate set")
        cand = A
