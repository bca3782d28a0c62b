# =============================================================
# nash.py
# Interação não cooperativa entre os CPs
#   - equilíbrio em forma fechada (1 + Q_N = max(ψ_n − b_n²/2))
#   - verificação independente por melhor resposta (seção áurea)
#   - η (preço da anarquia), γ_N e Γ
# =============================================================

import math
import logging
from dataclasses import dataclass

from modules.model import Flag, Market, p_star, reduced_utility, utility
from modules.centralized import CentralSolution, solve_centralized, DEFAULT_TOL
from utils.numeric_utils import golden_section_max

logger = logging.getLogger("equilibrio.nash")

TIE_REL_TOL = 1e-12
VERIFY_TOL = 1e-7


# -------------------------------------------------------------
@dataclass(frozen=True)
class NashSolution:
    Q_star: float
    M: tuple[int, ...]          # CPs que contribuem (índices 0-based)
    q: tuple[float, ...]
    p: tuple[float, ...]
    utilities: tuple[float, ...]
    total_utility: float
    gamma_N: float


@dataclass(frozen=True)
class NashCheck:
    ok: bool
    worst_gain: float
    gains: tuple[float, ...]
    best_responses: tuple[float, ...]


# -------------------------------------------------------------
def _valores(market: Market) -> list[float]:
    return [cp.psi - cp.b * cp.b / 2.0 for cp in market.cps]


def solve_nash(market: Market) -> NashSolution:
    """Equilíbrio de Nash em forma fechada; empates dividem Q igualmente."""
    v = _valores(market)
    vmax = max(v)

    if vmax <= 1:
        Q, M = 0.0, ()
        logger.info(f"📉 max(ψ − b²/2) = {vmax:.6g} <= 1: nenhum CP investe no público")
    else:
        Q = vmax - 1.0
        M = tuple(n for n, vn in enumerate(v) if vn >= vmax - TIE_REL_TOL * abs(vmax))

    cota = Q / len(M) if M else 0.0
    q = tuple(cota if n in M else 0.0 for n in range(market.N))
    p = tuple(
        cp.b * cp.b / 4.0 if n in M else p_star(cp, Q)
        for n, cp in enumerate(market.cps)
    )
    utilities = tuple(utility(cp, qn, Q, pn) for cp, qn, pn in zip(market.cps, q, p))

    return NashSolution(
        Q_star=Q,
        M=M,
        q=q,
        p=p,
        utilities=utilities,
        total_utility=math.fsum(utilities),
        gamma_N=gamma_nash(market, Q, M),
    )


# -------------------------------------------------------------
def gamma_nash(market: Market, Q_star: float, M: tuple[int, ...]) -> float:
    """γ_N com b²/4 para os CPs de M e p*(Q) para os demais."""
    if Q_star == 0:
        return 0.0
    P = math.fsum(
        cp.b * cp.b / 4.0 if n in M else p_star(cp, Q_star)
        for n, cp in enumerate(market.cps)
    )
    return Q_star / P


def gamma_nash_symmetric(market: Market, Q_star: float) -> float:
    """Caso |M| = N: γ_N = Q / Σ b²/4."""
    if Q_star == 0:
        return 0.0
    return Q_star / math.fsum(cp.b * cp.b / 4.0 for cp in market.cps)


# -------------------------------------------------------------
# MELHOR RESPOSTA / VERIFICAÇÃO
# -------------------------------------------------------------
def best_response(market: Market, n: int, Q_minus: float,
                  tol: float = 1e-10) -> tuple[float, float]:
    """
    Melhor resposta de CP n dado o investimento público dos demais.
    Busca em q ∈ [0, Q_minus + Σψ]; retorna (q*, utilidade).
    """
    cp = market.cps[n]

    def obj(x: float) -> float:
        return reduced_utility(cp, x, Q_minus + x)

    hi = Q_minus + market.psi_total
    x, _, _ = golden_section_max(obj, 0.0, hi, tol=tol)
    candidatos = [(obj(x), x), (obj(0.0), 0.0), (obj(hi), hi)]
    valor, melhor = max(candidatos)
    return melhor, valor


def verify_nash(market: Market, q, tol: float = VERIFY_TOL) -> NashCheck:
    """Nenhum CP ganha mais que `tol` com desvio unilateral em q."""
    q = [float(x) for x in q]
    Q = math.fsum(q)
    gains, respostas = [], []
    for n, cp in enumerate(market.cps):
        Q_minus = max(Q - q[n], 0.0)
        atual = reduced_utility(cp, q[n], Q_minus + q[n])
        melhor, valor = best_response(market, n, Q_minus)
        gains.append(valor - atual)
        respostas.append(melhor)

    worst = max(gains)
    ok = worst <= tol
    if not ok:
        n = gains.index(worst)
        logger.info(f"🔍 CP {n + 1} ganha {worst:.3g} desviando para q = {respostas[n]:.6g}")
    return NashCheck(ok=ok, worst_gain=worst, gains=tuple(gains), best_responses=tuple(respostas))


# -------------------------------------------------------------
# COMPARAÇÕES
# -------------------------------------------------------------
def price_of_anarchy(market: Market, tol: float = DEFAULT_TOL,
                     central: CentralSolution | None = None,
                     nash: NashSolution | None = None) -> float | Flag:
    """η = Q_C*/Q_N*; UNBOUNDED se só Q_N* = 0, UNDEFINED se ambos nulos."""
    central = central or solve_centralized(market, tol)
    nash = nash or solve_nash(market)
    if nash.Q_star == 0:
        return Flag.UNBOUNDED if central.Q_star > 0 else Flag.UNDEFINED
    return central.Q_star / nash.Q_star


def utility_ratio_Gamma(market: Market, tol: float = DEFAULT_TOL,
                        central: CentralSolution | None = None,
                        nash: NashSolution | None = None) -> float | Flag:
    """Γ = U_C*/U_N*; UNDEFINED se U_N* = 0."""
    central = central or solve_centralized(market, tol)
    nash = nash or solve_nash(market)
    if nash.total_utility == 0:
        return Flag.UNDEFINED
    return central.total_utility / nash.total_utility
