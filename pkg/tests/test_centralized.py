import math

import pytest
from hypothesis import given, settings

from modules.centralized import (
    benchmark_utility, foc_residual, gamma_centralized, nonzero_condition,
    solve_benchmark, solve_centralized, total_utility_at,
)
from modules.model import Market
from utils.errors import DomainError, InconsistencyError
from estrategias import markets


@pytest.mark.parametrize("psi, Q, gamma", [
    ([4.0], 2.5, 10.0),
    ([2.0, 2.0], 2.75, 22.0),
    ([7.0, 7.0], 12.75, 25.5 / 0.25),
])
def test_solucoes_conhecidas(psi, Q, gamma):
    sol = solve_centralized(Market.from_psi(psi))
    assert sol.Q_star == pytest.approx(Q, abs=1e-9)
    assert sol.gamma_C == pytest.approx(gamma, rel=1e-7)
    assert sol.is_interior


def test_solucao_de_canto():
    m = Market.from_psi([0.1, 0.1])
    assert not nonzero_condition(m)
    sol = solve_centralized(m)
    assert sol.Q_star == 0.0
    assert sol.gamma_C == 0.0
    assert not sol.is_interior
    assert sol.total_utility == pytest.approx(total_utility_at(m, 0.0))


def test_gamma_inconsistente():
    with pytest.raises(InconsistencyError):
        gamma_centralized(Market.from_psi([2.0]), 5.0)


@pytest.mark.parametrize("tol", [0.0, -1.0, math.nan])
def test_tol_invalida(tol):
    with pytest.raises(DomainError):
        solve_centralized(Market.from_psi([4.0]), tol)


def test_benchmark():
    m = Market.from_psi([4.0])
    assert solve_benchmark(m) == 3.0
    assert benchmark_utility(m) == pytest.approx(4.0 * math.log(4.0) - 3.0)
    assert solve_benchmark(Market.from_psi([0.3, 0.2])) == 0.0


# -------------------------------------------------------------
@given(markets(max_n=4))
@settings(max_examples=80, deadline=None)
def test_cpo_e_gamma(market):
    sol = solve_centralized(market)
    assert (sol.Q_star > 0) == nonzero_condition(market)
    if sol.Q_star > 0:
        assert foc_residual(market, sol.Q_star) == pytest.approx(0.0, abs=1e-8)
        # γ_C pela forma fechada coincide com Q/P
        assert sol.gamma_C == pytest.approx(sol.Q_star / sol.P, rel=1e-7)


@given(markets(max_n=4))
@settings(max_examples=80, deadline=None)
def test_otimo_global_em_Q(market):
    sol = solve_centralized(market)
    for dQ in (1e-3, 1e-1, 1.0):
        assert sol.total_utility >= total_utility_at(market, sol.Q_star + dQ) - 1e-12
        if sol.Q_star >= dQ:
            assert sol.total_utility >= total_utility_at(market, sol.Q_star - dQ) - 1e-12


@given(markets(max_n=4))
@settings(max_examples=80, deadline=None)
def test_benchmark_investe_mais(market):
    assert solve_benchmark(market) >= solve_centralized(market).Q_star - 1e-9
