"""Value arithmetic shared by every module.

Two modes exist. ``rational`` uses :class:`fractions.Fraction` and every
comparison is exact. ``float`` uses Python floats and compares with a
relative tolerance of ``EPS``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Value = Union[Fraction, float]

RATIONAL = "rational"
FLOAT = "float"
MODES = (RATIONAL, FLOAT)
EPS = 1e-9


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}; expected one of {MODES}")
    return mode


def parse_value(raw, mode: str = RATIONAL) -> Value:
    """Parse an int, float, Fraction or ``"p/q"`` string into a Value of ``mode``."""
    if isinstance(raw, bool):
        raise TypeError("booleans are not set-function values")
    if isinstance(raw, str):
        raw = raw.strip()
        if mode == RATIONAL or "/" in raw:
            val = Fraction(raw)
        else:
            val = float(raw)
    elif isinstance(raw, Rational):
        val = Fraction(raw)
    elif isinstance(raw, float):
        if not math.isfinite(raw):
            raise ValueError(f"non-finite value {raw!r}")
        val = Fraction(raw) if mode == RATIONAL else raw
    else:
        raise TypeError(f"cannot interpret {raw!r} as a value")
    return coerce(val, mode)


def coerce(val, mode: str) -> Value:
    if mode == RATIONAL:
        if isinstance(val, float):
            raise TypeError("float value in rational mode; declare mode='float'")
        return Fraction(val)
    out = float(val)
    if not math.isfinite(out):
        raise ValueError(f"non-finite value {val!r}")
    return out


def format_value(val: Value) -> Union[str, float]:
    """Serialize: rationals as ``"p/q"`` (or ``"p"``), floats unchanged."""
    if isinstance(val, Fraction):
        return str(val)
    if isinstance(val, int):
        return str(val)
    return float(val)


def _scale(a, b) -> float:
    return max(1.0, abs(float(a)), abs(float(b)))


def eq(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return abs(a - b) <= EPS * _scale(a, b)
    return a == b


def lt(a, b) -> bool:
    if isinstance(a, float) or isinstance(b, float):
        return a < b - EPS * _scale(a, b)
    return a < b


def le(a, b) -> bool:
    return not lt(b, a)


def is_zero(a) -> bool:
    if isinstance(a, float):
        return abs(a) <= EPS
    return a == 0


def ratio(num, den) -> Value:
    if isinstance(num, float) or isinstance(den, float):
        return float(num) / float(den)
    return Fraction(num) / Fraction(den)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int):
    """Yield the element indices set in ``mask`` in ascending order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def mask_of(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m
