"""Compiled and pure-Python kernels must agree bit for bit."""
import os
import subprocess
import sys
from fractions import Fraction as Fr

import numpy as np
import pytest

from subsearch import kernels
from subsearch.generators import coverage, dual_coverage
from subsearch.kernels import Table, available_backends

needs_compiled = pytest.mark.skipif("cython" not in available_backends(), reason="compiled kernels not built")


def tables(n, seed, mode="rational"):
    f, g = coverage(n, seed), dual_coverage(n, seed + 1)
    return Table.build(f.table(), mode), Table.build(g.table(), mode)


def both(fn):
    return [fn(b) for b in available_backends()]


@needs_compiled
@pytest.mark.parametrize("mode", ["rational", "float"])
@pytest.mark.parametrize("seed", range(4))
def test_parity(seed, mode):
    n = 5 + seed % 3
    F, G = tables(n, seed, mode)
    full = (1 << n) - 1
    for T in (F, G):
        a, b = both(lambda be: kernels.structure_scan(T, n, backend=be))
        assert tuple(a) == tuple(b)
    a, b = both(lambda be: kernels.shifted_argmax(G, F, Fr(1, 7), full, backend=be))
    assert a == b
    a, b = both(lambda be: kernels.min_connectivity(F, G, n, backend=be))
    assert a == b
    a, b = both(lambda be: kernels.optimal_order(G, F, n, backend=be))
    assert a == b
    (ca, sa, _), (cb, sb, _) = both(lambda be: kernels.permutation_costs(G, F, n, backend=be))
    assert sa == sb and list(ca) == list(cb)


@needs_compiled
def test_fictitious_play_parity():
    rng = np.random.default_rng(0)
    M = rng.integers(1, 9, size=(24, 4)).astype(float)
    a, b = both(lambda be: kernels.fictitious_play(M, 5000, 1e-6, backend=be))
    assert list(a[0]) == list(b[0]) and list(a[1]) == list(b[1])
    assert a[2:] == b[2:]


def test_large_rationals_fall_back_to_python_ints():
    # denominators whose lcm exceeds int64 force the arbitrary-precision path
    w = [Fr(1, q) for q in (1000003, 1000033, 1000037, 1000039, 1000081)]
    vals = [sum(w[k] for k in range(5) if m >> k & 1) for m in range(32)]
    T = Table.build(vals, "rational")
    assert T.maxabs > 1 << 62
    outs = both(lambda be: kernels.structure_scan(T, 5, backend=be))
    assert all(tuple(o) == tuple(outs[0]) for o in outs)


def test_pure_switch_env():
    env = dict(os.environ, SUBSEARCH_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from subsearch import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_unknown_backend():
    F, _ = tables(3, 0)
    with pytest.raises(ValueError):
        kernels.structure_scan(F, 3, backend="fortran")
