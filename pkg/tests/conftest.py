from fractions import Fraction as Fr

import pytest

from subsearch.density import SearchInstance
from subsearch.kernels import available_backends
from subsearch.setfn import GroundSet, ModularFunction, TabularFunction

# F3: submodular and monotone, yet no precedence-closure cost reproduces it.
# Table by mask: {}, {1}, {2}, {1,2}, {3}, {1,3}, {2,3}, {1,2,3}
F3_VALUES = [0, 1, 1, 2, 1, 2, Fr(3, 2), 2]


def make_f3():
    return TabularFunction(GroundSet.of_size(3), F3_VALUES)


def uniform(n, ground=None):
    return ModularFunction(ground or GroundSet.of_size(n), [Fr(1, n)] * n)


def modular_instance(f, g):
    ground = GroundSet.of_size(len(f))
    return SearchInstance(ModularFunction(ground, list(f)), ModularFunction(ground, list(g)))


@pytest.fixture
def f3():
    return make_f3()


@pytest.fixture
def f3_inst():
    f = make_f3()
    return SearchInstance(f, uniform(3, f.ground))


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


# PASS/FAIL lines from the acceptance suite, repeated at the end of the run.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
