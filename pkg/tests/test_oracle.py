import pytest

from modules.centralized import nonzero_condition, solve_centralized
from modules.bargaining import solve_bargaining
from modules.model import CpParams, Market, p_star
from modules.oracle import (
    GridSpec, grid_argmax_p, grid_bargaining, grid_best_response, grid_centralized,
)
from modules.processador_integridade import P_STEPS_VERIFY, mercados_aleatorios
from utils.errors import DomainError, SizeError

# grades reduzidas (custo da suíte)
P_STEPS = 2001


def test_grid_spec():
    g = GridSpec(0.0, 1.0, 11)
    assert g.step == pytest.approx(0.1)
    assert len(g.points()) == 11
    with pytest.raises(DomainError):
        GridSpec(1.0, 1.0, 11)
    with pytest.raises(DomainError):
        GridSpec(0.0, 1.0, 1)


@pytest.mark.parametrize("Q", [0.0, 0.7, 2.5, 6.0])
def test_grid_argmax_p(Q):
    cp = CpParams.from_psi(4.0, 1.3)
    assert grid_argmax_p(cp, Q) == pytest.approx(p_star(cp, Q), abs=1e-3)


def test_grid_centralized():
    m = Market.from_psi([2.0, 2.0])
    Q, total = grid_centralized(m, GridSpec(0.0, 4.0, 401), P_STEPS)
    sol = solve_centralized(m)
    assert Q == pytest.approx(sol.Q_star, abs=2e-2)
    assert total == pytest.approx(sol.total_utility, abs=1e-5)


def test_grid_centralized_limite_de_tamanho():
    with pytest.raises(SizeError):
        grid_centralized(Market.from_psi([1.0] * 4))


def test_grid_best_response():
    m = Market.from_psi([2.0, 1.5])
    grade = GridSpec(0.0, 3.5, 351)
    assert grid_best_response(m, 0, 0.0, grade, P_STEPS) == pytest.approx(0.5, abs=1e-2)
    assert grid_best_response(m, 1, 0.5, grade, P_STEPS) == pytest.approx(0.0, abs=1e-2)
    with pytest.raises(DomainError):
        grid_best_response(m, 0, -1.0, grade, P_STEPS)


def test_grid_bargaining_simetrico():
    m = Market.from_psi([2.0, 2.0])
    (q1, q2), produto = grid_bargaining(m, p_steps=P_STEPS)
    assert produto > 0
    assert q1 + q2 == pytest.approx(solve_bargaining(m).Q_star, abs=2e-2)
    assert q1 == pytest.approx(q2, abs=2e-2)


def test_barganha_bate_com_grade_em_mercados_sorteados():
    sorteados = [m for m, _ in mercados_aleatorios(42, 50) if m.N == 2 and nonzero_condition(m)]
    assert len(sorteados) >= 5
    for m in sorteados:
        sol = solve_bargaining(m)
        (q1, q2), _ = grid_bargaining(m, p_steps=P_STEPS_VERIFY)
        assert q1 + q2 == pytest.approx(sol.Q_star, abs=2e-3), m
        assert all(u >= ud - 1e-12 for u, ud in zip(sol.utilities, sol.disagreement))


def test_grid_bargaining_desacordo():
    (q1, q2), produto = grid_bargaining(Market.from_psi([0.3, 0.3], [2.0, 2.0]), p_steps=P_STEPS)
    assert (q1, q2, produto) == (0.0, 0.0, 0.0)


def test_grid_bargaining_so_dois_cps():
    with pytest.raises(SizeError):
        grid_bargaining(Market.from_psi([2.0, 2.0, 2.0]))
