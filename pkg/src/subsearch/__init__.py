"""Submodular search: expected cost, maximum-density decomposition,
series-parallel exact solving, the search game and scheduling adapters."""
from .density import InstanceError, SearchInstance, density, max_density_subset
from .kernels import BACKEND
from .setfn import (
    CapacityError,
    GroundSet,
    ModularFunction,
    TabularFunction,
    contract,
    curvature,
    direct_sum,
    dual,
    restrict,
    verify_structure,
)
from .sidney import brute_force_optimal, expected_cost, sidney_decomposition, two_approx_search
from .spd import NotDecomposableError, spd_decompose, spd_optimal_search
from .game import game_value_spd, matrix_game_solve, modular_game_solution

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapacityError",
    "GroundSet",
    "InstanceError",
    "ModularFunction",
    "NotDecomposableError",
    "SearchInstance",
    "TabularFunction",
    "brute_force_optimal",
    "contract",
    "curvature",
    "density",
    "direct_sum",
    "dual",
    "expected_cost",
    "game_value_spd",
    "matrix_game_solve",
    "max_density_subset",
    "modular_game_solution",
    "restrict",
    "sidney_decomposition",
    "spd_decompose",
    "spd_optimal_search",
    "two_approx_search",
    "verify_structure",
]
