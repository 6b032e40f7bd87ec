from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from subsearch import generators
from subsearch.density import (
    InstanceError,
    SearchInstance,
    density,
    max_density_subset,
    maximize_shifted,
)
from subsearch.setfn import GroundSet, ModularFunction, TabularFunction

import oracles
from conftest import modular_instance


def test_density_examples(f3_inst):
    assert density(f3_inst, 7) == Fr(1, 2)
    assert density(f3_inst, 0b110) == Fr(4, 9)
    inst = modular_instance([1, 2, 3], [1, 2, 3])
    assert all(density(inst, m) == 1 for m in range(1, 8))
    with pytest.raises(ValueError):
        density(inst, 0)


def test_maximize_shifted_examples(f3_inst, backend):
    assert maximize_shifted(f3_inst, 0, backend=backend) == 7
    assert maximize_shifted(f3_inst, Fr(1, 2), backend=backend) == 7
    inst = modular_instance([1, 2], [2, 1])
    assert maximize_shifted(inst, 1, backend=backend) == 1


def test_max_density_examples(f3_inst, backend):
    r = max_density_subset(f3_inst, backend)
    assert (r.set, r.rho) == (7, Fr(1, 2))
    r = max_density_subset(modular_instance([1, 1], [Fr(2, 3), Fr(1, 3)]), backend)
    assert (r.set, r.rho) == (1, Fr(2, 3))
    r = max_density_subset(modular_instance([1, 2, 3], [1, 2, 3]), backend)
    assert (r.set, r.rho) == (7, 1)


def test_validation_rejects_with_witness():
    G = GroundSet.of_size(2)
    f = ModularFunction(G, [1, 1])
    g = TabularFunction(G, [0, 0, 1, 1])
    with pytest.raises(InstanceError) as exc:
        SearchInstance(f, g)
    assert exc.value.check == "g.below_total" and exc.value.witness == ["2"]
    bad_f = TabularFunction(G, [0, 1, 1, 3])
    with pytest.raises(InstanceError) as exc:
        SearchInstance(bad_f, ModularFunction(G, [1, 1]))
    assert exc.value.check == "f.submodular"


def test_ground_mismatch():
    with pytest.raises(ValueError):
        SearchInstance(ModularFunction(GroundSet.of_size(2), [1, 1]), ModularFunction(GroundSet.of_size(3), [1, 1, 1]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6))
def test_matches_exhaustive_search(n, seed):
    inst = generators.coverage_instance(n, seed)
    r = max_density_subset(inst)
    M, rho = oracles.max_density_set(inst.f.table(), inst.g.table(), n)
    assert (r.set, r.rho) == (M, rho)
    assert r.rounds <= n


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_lattice_property(n, seed):
    inst = generators.concave_modular_instance(n, seed)
    ft, gt = inst.f.table(), inst.g.table()
    rho = max_density_subset(inst).rho
    tops = [m for m in range(1, 1 << n) if Fr(gt[m]) / ft[m] == rho]
    for A in tops:
        for B in tops:
            assert Fr(gt[A | B]) / ft[A | B] == rho
            if A & B:
                assert Fr(gt[A & B]) / ft[A & B] == rho
            else:
                assert ft[A | B] == ft[A] + ft[B] and gt[A | B] == gt[A] + gt[B]
