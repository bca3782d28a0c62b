# =============================================================
# processador_integridade.py
# Processador de Integridade – solvers x oráculos de força bruta
# v2.0 | Exemplos fixos + mercados aleatórios semeados + log único
# =============================================================

import logging

import numpy as np

from modules import bargaining, centralized, cooperative, model, nash, oracle
from modules.model import Flag, Market, Status
from modules.validator_core import checar, checar_igual, checar_limite, validar_generico
from utils.log_utils import log_result

logger = logging.getLogger("equilibrio.integridade")

# grades menores que o padrão do oráculo (custo da suíte)
Q_STEPS_VERIFY = 2001
P_STEPS_VERIFY = 4001

PSI_RANGE = (0.2, 6.0)
B_RANGE = (1.0, 2.5)
Q_RANGE = (0.0, 10.0)


def _grid_p(cp):
    return oracle.GridSpec(0.0, cp.psi + 1.0, P_STEPS_VERIFY)


def _grid_q(market):
    return oracle.GridSpec(0.0, market.psi_total, Q_STEPS_VERIFY)


def _rotulo(market: Market) -> str:
    psi = ",".join(f"{x:.4g}" for x in market.psi)
    b = ",".join(f"{x:.4g}" for x in market.b)
    return f"psi=[{psi}] b=[{b}]"


# -------------------------------------------------------------
# CHECAGENS POR MERCADO
# -------------------------------------------------------------
def checar_p_star(market: Market, Q: float) -> list[list]:
    linhas = []
    for n, cp in enumerate(market.cps):
        esperado = oracle.grid_argmax_p(cp, Q, _grid_p(cp))
        linhas.append(checar(f"p_star CP{n + 1} Q={Q:.4g} {_rotulo(market)}",
                             esperado, model.p_star(cp, Q), 1e-3))
    return linhas


def checar_centralizado(market: Market) -> list[list]:
    sol = centralized.solve_centralized(market)
    linhas = [checar_igual(f"Q_C > 0 sse condição de canto {_rotulo(market)}",
                           centralized.nonzero_condition(market), sol.Q_star > 0)]
    if market.N <= 2:
        Q_grade, _ = oracle.grid_centralized(market, _grid_q(market), P_STEPS_VERIFY)
        linhas.append(checar(f"Q_C vs grade {_rotulo(market)}", Q_grade, sol.Q_star, 1e-3))
    if sol.Q_star > 0:
        linhas.append(checar(f"gamma_C vs Q/P {_rotulo(market)}",
                             sol.Q_star / sol.P, sol.gamma_C, 1e-8 * sol.gamma_C))
    linhas.append(checar_limite(f"benchmark Q >= Q_C {_rotulo(market)}",
                                sol.Q_star, centralized.solve_benchmark(market)))
    return linhas


def checar_nash(market: Market) -> list[list]:
    sol = nash.solve_nash(market)
    chk = nash.verify_nash(market, sol.q)
    linhas = [checar_limite(f"ganho de desvio Nash {_rotulo(market)}", nash.VERIFY_TOL,
                            chk.worst_gain, sentido="<=")]
    for n in sol.M:
        cp = market.cps[n]
        linhas.append(checar(f"p Nash = b²/4 CP{n + 1} {_rotulo(market)}",
                             cp.b * cp.b / 4.0, sol.p[n], 0.0))
    if sol.Q_star > 0 and market.N >= 2:
        eta = nash.price_of_anarchy(market)
        linhas.append(checar_limite(f"eta > 1 {_rotulo(market)}", 1.0, eta, sentido=">="))
    return linhas


def checar_barganha(market: Market) -> list[list]:
    sol = bargaining.solve_bargaining(market)
    esperado = Status.OK if centralized.nonzero_condition(market) else Status.DEGENERATE
    linhas = [checar_igual(f"status barganha {_rotulo(market)}", esperado, sol.status)]
    if sol.status is not Status.OK:
        return linhas

    linhas.append(checar_limite(f"beta >= 1 {_rotulo(market)}", 1.0, sol.beta, 1e-9))
    for n, (u, ud) in enumerate(zip(sol.utilities, sol.disagreement)):
        linhas.append(checar_limite(f"U^B >= U^D CP{n + 1} {_rotulo(market)}", ud, u, 1e-12))
    if sol.interior:
        linhas.append(checar(f"CPO centralizada em Q_B {_rotulo(market)}", 0.0,
                             centralized.foc_residual(market, sol.Q_star), 1e-6))
    if market.N == 2:
        (q1, q2), _ = oracle.grid_bargaining(market, None, P_STEPS_VERIFY)
        linhas.append(checar(f"Q_B vs grade {_rotulo(market)}", q1 + q2, sol.Q_star, 2e-3))
    return linhas


# -------------------------------------------------------------
# EXEMPLOS FIXOS
# -------------------------------------------------------------
def checar_exemplos() -> list[list]:
    linhas = []

    for psi, b, Q, gamma in (([4.0], [1.0], 2.5, 10.0), ([2.0, 2.0], [1.0, 1.0], 2.75, 22.0)):
        m = Market.from_psi(psi, b)
        sol = centralized.solve_centralized(m)
        linhas.append(checar(f"Q_C {_rotulo(m)}", Q, sol.Q_star, 1e-8))
        linhas.append(checar(f"gamma_C {_rotulo(m)}", gamma, sol.gamma_C, 1e-6))
    canto = Market.from_psi([0.1, 0.1])
    linhas.append(checar(f"Q_C canto {_rotulo(canto)}", 0.0,
                         centralized.solve_centralized(canto).Q_star, 0.0))
    linhas.append(checar("benchmark psi=[4]", 3.0,
                         centralized.solve_benchmark(Market.from_psi([4.0])), 0.0))

    cp = model.CpParams.from_psi(4.0, 1.0)
    for Q, p in ((0.0, 1.0), (2.5, 0.25)):
        linhas.append(checar(f"p_star psi=4 Q={Q}", p, model.p_star(cp, Q), 1e-12))
        linhas.append(checar(f"grid_argmax_p psi=4 Q={Q}", p,
                             oracle.grid_argmax_p(cp, Q, _grid_p(cp)), 1e-3))

    assim = Market.from_psi([2.0, 1.5])
    sol = nash.solve_nash(assim)
    linhas.append(checar(f"Q_N {_rotulo(assim)}", 0.5, sol.Q_star, 1e-12))
    linhas.append(checar_igual(f"M {_rotulo(assim)}", (0,), sol.M))
    linhas.append(checar_igual(f"verify_nash equilíbrio {_rotulo(assim)}", True,
                               nash.verify_nash(assim, sol.q).ok))
    linhas.append(checar_igual(f"verify_nash q=0 {_rotulo(assim)}", False,
                               nash.verify_nash(assim, [0.0, 0.0]).ok))
    linhas.append(checar(f"grid_best_response CP1 {_rotulo(assim)}", 0.5,
                         oracle.grid_best_response(assim, 0, 0.0, _grid_q(assim), P_STEPS_VERIFY), 1e-3))

    for psi, esperado in (([1.2, 1.2], Flag.UNBOUNDED), ([0.1, 0.1], Flag.UNDEFINED)):
        m = Market.from_psi(psi)
        linhas.append(checar_igual(f"eta {_rotulo(m)}", esperado, nash.price_of_anarchy(m)))
    sim = Market.from_psi([2.0, 2.0])
    linhas.append(checar(f"eta {_rotulo(sim)}", 5.5, nash.price_of_anarchy(sim), 1e-8))

    sol_b = bargaining.solve_bargaining(sim)
    linhas.append(checar(f"Q_B {_rotulo(sim)}", 2.75, sol_b.Q_star, 1e-6))
    linhas.append(checar(f"beta {_rotulo(sim)}", 1.0, sol_b.beta, 1e-6))
    degenerado = Market.from_psi([0.3, 0.3], [2.0, 2.0])
    linhas.append(checar_igual(f"status barganha {_rotulo(degenerado)}", Status.DEGENERATE,
                               bargaining.solve_bargaining(degenerado).status))
    forte = Market.from_psi([5.0, 0.8])
    sol_f = bargaining.solve_bargaining(forte)
    linhas.append(checar_limite(f"beta > 1 {_rotulo(forte)}", 1.0, sol_f.beta, sentido=">="))
    linhas.append(checar(f"q2^B = 0 {_rotulo(forte)}", 0.0, sol_f.q[1], 1e-9))

    coop = Market.from_psi([7.0, 7.0])
    linhas.append(checar_igual(f"cooperativo {_rotulo(coop)}", Status.INFEASIBLE,
                               cooperative.solve_cooperative(coop).status))
    unico = Market.from_psi([4.0])
    sol_c = cooperative.solve_cooperative(unico)
    linhas.append(checar_igual(f"cooperativo {_rotulo(unico)}", Status.OK, sol_c.status))
    return linhas


# -------------------------------------------------------------
def mercados_aleatorios(seed: int, n_random: int) -> list[tuple[Market, float]]:
    """Mercados sorteados (N ∈ {1, 2}) e um Q de teste para p_star."""
    rng = np.random.default_rng(seed)
    saida = []
    for _ in range(n_random):
        N = int(rng.integers(1, 3))
        psi = rng.uniform(*PSI_RANGE, size=N)
        b = rng.uniform(*B_RANGE, size=N)
        Q = float(rng.uniform(*Q_RANGE))
        saida.append((Market.from_psi(psi.tolist(), b.tolist()), Q))
    return saida


def processar_integridade(seed: int = 42, n_random: int = 50,
                          report_path: str | None = None) -> dict:
    """
    Executa a suíte solver x oráculo: exemplos fixos + `n_random`
    mercados aleatórios. Registra o resultado no log de operações.
    """
    logger.info(f"🔍 Iniciando verificação (seed={seed}, aleatórios={n_random})")

    grupos = {"exemplos": checar_exemplos()}
    for i, (m, Q) in enumerate(mercados_aleatorios(seed, n_random)):
        grupos[f"aleatorio_{i + 1:03d}"] = (
            checar_p_star(m, Q) + checar_centralizado(m) + checar_nash(m) + checar_barganha(m)
        )

    resultado = validar_generico(grupos, report_path)
    status_geral = "OK" if resultado["ok"] else "FALHA"

    # -----------------------------------------------------
    # 🪵 Registra resultado no log de operações
    # -----------------------------------------------------
    try:
        log_result("verify", "todos", f"seed={seed};random={n_random}", status_geral,
                   resultado["mensagem"])
    except Exception as e:
        logger.warning(f"⚠️ Falha ao registrar log de verificação: {e}")

    return {**resultado, "status": status_geral, "seed": seed, "random": n_random}
