# =============================================================
# bargaining.py
# Barganha de Nash entre os CPs
#   - utilidade de desacordo (Q = 0, só investimento privado)
#   - divisão interna por water-filling (excedentes iguais)
#   - busca externa em Q: seção áurea + polimento pela derivada
# =============================================================

import math
import logging
from dataclasses import dataclass

import numpy as np

from modules.model import (
    CpParams, Flag, Market, Status, f_of_Q, p_star, reduced_utility, surplus_slope,
)
from modules.centralized import (
    CentralSolution, DEFAULT_TOL, nonzero_condition, solve_centralized,
)
from modules.nash import NashSolution, solve_nash
from utils.errors import DomainError, InconsistencyError
from utils.numeric_utils import bisect_root, golden_section_max, water_fill

logger = logging.getLogger("equilibrio.bargaining")

INTERIOR_TOL = 1e-9
PROBE_POINTS = 200
PROBE_SLACK = 1e-9
MAX_EXPAND = 200


# -------------------------------------------------------------
@dataclass(frozen=True)
class InnerAllocation:
    q: tuple[float, ...]
    level: float
    log_product: float


@dataclass(frozen=True)
class BargainSolution:
    status: Status
    Q_star: float
    q: tuple[float, ...]
    p: tuple[float, ...]
    utilities: tuple[float, ...]
    disagreement: tuple[float, ...]
    total_utility: float
    beta: float | Flag
    gamma_B: float
    alpha: float | Flag
    interior: bool


# -------------------------------------------------------------
# DESACORDO / EXCEDENTE
# -------------------------------------------------------------
def disagreement_utility(cp: CpParams) -> float:
    """U^D = ψ·log((√(1+2b²ψ)+1)/2) − ((√(1+2b²ψ)−1)/(2b))²."""
    return cp.psi * f_of_Q(cp, 0.0) - p_star(cp, 0.0)


def surplus(cp: CpParams, Q: float, ud: float | None = None) -> float:
    """S(Q) = ψ·f(Q) − p*(Q) − U^D: excedente bruto antes de pagar q."""
    ud = disagreement_utility(cp) if ud is None else ud
    return cp.psi * f_of_Q(cp, Q) - p_star(cp, Q) - ud


def _surpluses(market: Market, Q: float, uds) -> np.ndarray:
    return np.array([surplus(cp, Q, ud) for cp, ud in zip(market.cps, uds)])


# -------------------------------------------------------------
# ALOCAÇÃO INTERNA
# -------------------------------------------------------------
def inner_allocation(market: Market, Q: float, uds=None) -> InnerAllocation | Status:
    """
    Divisão de Q que maximiza Π(S_n − q_n): q_n = max(0, S_n − c).
    Devolve Status.INFEASIBLE quando ΣS_n(Q) <= Q.
    """
    if Q < 0 or not math.isfinite(Q):
        raise DomainError(f"Q deve ser finito e >= 0 (recebido {Q!r})")
    uds = [disagreement_utility(cp) for cp in market.cps] if uds is None else uds
    S = _surpluses(market, Q, uds)
    resultado = water_fill(S, Q)
    if resultado is None:
        return Status.INFEASIBLE
    q, nivel = resultado
    restos = S - q
    log_product = float(np.sum(np.log(restos))) if np.all(restos > 0) else -math.inf
    return InnerAllocation(q=tuple(float(x) for x in q), level=nivel, log_product=log_product)


def _log_product(market: Market, Q: float, uds) -> float:
    inner = inner_allocation(market, Q, uds)
    return -math.inf if inner is Status.INFEASIBLE else inner.log_product


def outer_profile(market: Market, Q_values, uds=None) -> np.ndarray:
    """Log do produto de Nash (divisão water-filling) em cada Q."""
    uds = [disagreement_utility(cp) for cp in market.cps] if uds is None else uds
    return np.array([_log_product(market, float(Q), uds) for Q in Q_values])


def log_product_slope(market: Market, Q: float, uds=None) -> float:
    """
    Derivada do objetivo externo: (Σ_A S'_n − 1)/c + Σ_B S'_n/S_n,
    com A os CPs que pagam (q_n > 0) e B os demais.
    """
    uds = [disagreement_utility(cp) for cp in market.cps] if uds is None else uds
    S = _surpluses(market, Q, uds)
    resultado = water_fill(S, Q)
    if resultado is None:
        return -math.inf
    q, nivel = resultado
    dS = np.array([surplus_slope(cp, Q) for cp in market.cps])
    ativos = q > 0
    slope = 0.0
    if ativos.any():
        slope += (dS[ativos].sum() - 1.0) / nivel
    inativos = ~ativos
    if inativos.any():
        if np.any(S[inativos] <= 0):
            return math.inf
        slope += float(np.sum(dS[inativos] / S[inativos]))
    return float(slope)


# -------------------------------------------------------------
# BUSCA EXTERNA
# -------------------------------------------------------------
def _limite_superior(market: Market, Q_C: float, uds) -> float:
    """Raiz de ΣS(Q) − Q à direita de Q_C (fim da região viável)."""
    def folga(Q: float) -> float:
        return float(_surpluses(market, Q, uds).sum()) - Q

    hi = max(2.0 * Q_C, market.psi_total, 1.0)
    for _ in range(MAX_EXPAND):
        if folga(hi) < 0:
            break
        hi *= 2.0
    else:
        raise InconsistencyError(f"Região viável da barganha não limitada até Q = {hi!r}")
    return bisect_root(folga, Q_C, hi)


def _polir(market: Market, uds, x: float, lo: float, hi: float, Q_hi: float,
           tol: float) -> float:
    """Refina o máximo pela raiz da derivada (objetivo côncavo em Q)."""
    def slope(Q: float) -> float:
        return log_product_slope(market, Q, uds)

    lo = max(lo, 0.0)
    for _ in range(MAX_EXPAND):
        if lo > 0 and slope(lo) >= 0:
            break
        lo = lo / 2.0 if lo > 0 else x / 2.0
    for _ in range(MAX_EXPAND):
        if hi < Q_hi and slope(hi) <= 0:
            break
        hi = (hi + Q_hi) / 2.0 if hi < Q_hi else (x + Q_hi) / 2.0

    s_lo, s_hi = slope(lo), slope(hi)
    if not (s_lo >= 0 >= s_hi):
        logger.warning(f"⚠️ Derivada sem troca de sinal em [{lo:.6g}, {hi:.6g}]; mantendo seção áurea")
        return x
    return bisect_root(slope, lo, hi, xtol=tol * 1e-2)


def _buscar(market: Market, uds, Q_hi: float, tol: float) -> float:
    def obj(Q: float) -> float:
        return _log_product(market, Q, uds)

    x, a, b = golden_section_max(obj, 0.0, Q_hi, tol=tol)
    melhor = obj(x)

    # guarda: amostra grossa do objetivo
    pontos = np.linspace(0.0, Q_hi, PROBE_POINTS + 2)[1:-1]
    perfil = outer_profile(market, pontos, uds)
    j = int(np.argmax(perfil))
    if perfil[j] > melhor + PROBE_SLACK:
        logger.warning(
            f"⚠️ Amostra em Q = {pontos[j]:.6g} supera a seção áurea "
            f"({perfil[j]:.12g} > {melhor:.12g}); refazendo a busca"
        )
        lo = pontos[j - 1] if j > 0 else 0.0
        hi = pontos[j + 1] if j + 1 < len(pontos) else Q_hi
        x, a, b = golden_section_max(obj, lo, hi, tol=tol)

    return _polir(market, uds, x, a, b, Q_hi, tol)


# -------------------------------------------------------------
def solve_bargaining(market: Market, tol: float = DEFAULT_TOL,
                     central: CentralSolution | None = None,
                     nash: NashSolution | None = None) -> BargainSolution:
    """Solução de barganha de Nash com β, γ_B e α."""
    if not (tol > 0 and math.isfinite(tol)):
        raise DomainError(f"tol deve ser > 0 (recebido {tol!r})")

    uds = tuple(disagreement_utility(cp) for cp in market.cps)

    if not nonzero_condition(market):
        logger.info("📉 Condição de barganha não nula falhou: ponto de desacordo")
        p = tuple(p_star(cp, 0.0) for cp in market.cps)
        return BargainSolution(
            status=Status.DEGENERATE,
            Q_star=0.0,
            q=tuple(0.0 for _ in market.cps),
            p=p,
            utilities=uds,
            disagreement=uds,
            total_utility=math.fsum(uds),
            beta=Flag.UNDEFINED,
            gamma_B=0.0,
            alpha=0.0,
            interior=False,
        )

    central = central or solve_centralized(market, tol)
    nash = nash or solve_nash(market)

    Q_hi = _limite_superior(market, central.Q_star, uds)
    Q = _buscar(market, uds, Q_hi, tol)

    inner = inner_allocation(market, Q, uds)
    if inner is Status.INFEASIBLE:
        raise InconsistencyError(f"Q_B = {Q!r} fora da região viável (Q_hi = {Q_hi!r})")

    q = inner.q
    p = tuple(p_star(cp, Q) for cp in market.cps)
    utilities = tuple(reduced_utility(cp, qn, Q) for cp, qn in zip(market.cps, q))
    interior = all(qn > INTERIOR_TOL for qn in q)
    beta = Q / central.Q_star
    alpha = Flag.UNBOUNDED if nash.Q_star == 0 else Q / nash.Q_star

    if not interior and beta <= 1 + INTERIOR_TOL:
        logger.info(f"🔍 Solução de fronteira com β = {beta:.12g} (sem desigualdade estrita)")

    return BargainSolution(
        status=Status.OK,
        Q_star=Q,
        q=q,
        p=p,
        utilities=utilities,
        disagreement=uds,
        total_utility=math.fsum(utilities),
        beta=beta,
        gamma_B=Q / math.fsum(p),
        alpha=alpha,
        interior=interior,
    )
