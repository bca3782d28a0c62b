# =============================================================
# centralized.py
# Alocação centralizada: maximiza a utilidade total dos CPs
# v1.0 | CPO por bisseção + benchmark sem investimento privado
# =============================================================

import math
import logging
from dataclasses import dataclass

from modules.model import Market, f_of_Q, p_star, surplus_slope
from utils.errors import DomainError, InconsistencyError
from utils.numeric_utils import bisect_root

logger = logging.getLogger("equilibrio.centralized")

DEFAULT_TOL = 1e-10
MAX_WIDEN = 60


# -------------------------------------------------------------
@dataclass(frozen=True)
class CentralSolution:
    Q_star: float
    p: tuple[float, ...]
    gamma_C: float
    total_utility: float
    is_interior: bool

    @property
    def P(self) -> float:
        return math.fsum(self.p)


# -------------------------------------------------------------
def foc_residual(market: Market, Q: float) -> float:
    """∂(ΣU)/∂Q com p = p*(Q): Σ (s_n − t)/b_n² − 1. Estritamente decrescente."""
    return math.fsum(surplus_slope(cp, Q) for cp in market.cps) - 1.0


def nonzero_condition(market: Market) -> bool:
    """Q_C* > 0 sse Σ(√(1+2b²ψ) − 1)/b² > 1 (resíduo positivo em Q = 0)."""
    return foc_residual(market, 0.0) > 0


def total_utility_at(market: Market, Q: float) -> float:
    """Σ U_n com p = p*(Q) e Σq = Q (independe da divisão de q)."""
    return math.fsum(cp.psi * f_of_Q(cp, Q) - p_star(cp, Q) for cp in market.cps) - Q


# -------------------------------------------------------------
def gamma_centralized(market: Market, Q_star: float) -> float:
    """γ_C = 2Q*/(Σψ − (1 + Q*))."""
    if Q_star == 0:
        return 0.0
    denominador = market.psi_total - (1.0 + Q_star)
    if denominador <= 0:
        raise InconsistencyError(
            f"Σψ − (1+Q) = {denominador!r} <= 0: Q = {Q_star!r} não é ótimo centralizado"
        )
    return 2.0 * Q_star / denominador


def solve_centralized(market: Market, tol: float = DEFAULT_TOL) -> CentralSolution:
    """Resolve o problema centralizado pela condição de primeira ordem."""
    if not (tol > 0 and math.isfinite(tol)):
        raise DomainError(f"tol deve ser > 0 (recebido {tol!r})")

    if not nonzero_condition(market):
        logger.info(f"📉 Condição de Q_C > 0 falhou (resíduo {foc_residual(market, 0.0):.6g}); solução de canto")
        Q = 0.0
    else:
        def residuo(x: float) -> float:
            return foc_residual(market, x)

        hi = market.psi_total
        for _ in range(MAX_WIDEN):
            if residuo(hi) < 0:
                break
            logger.warning(f"⚠️ Resíduo não negativo em Q = {hi:.6g}; dobrando o intervalo")
            hi *= 2.0
        else:
            raise InconsistencyError(f"Não foi possível isolar a raiz da CPO até Q = {hi!r}")
        Q = bisect_root(residuo, 0.0, hi, xtol=tol * 1e-2)

    p = tuple(p_star(cp, Q) for cp in market.cps)
    return CentralSolution(
        Q_star=Q,
        p=p,
        gamma_C=gamma_centralized(market, Q),
        total_utility=total_utility_at(market, Q),
        is_interior=Q > 0,
    )


# -------------------------------------------------------------
# BENCHMARK (sem investimento privado)
# -------------------------------------------------------------
def solve_benchmark(market: Market) -> float:
    """argmax_Q Σψ·log(1+Q) − Q = max(0, Σψ − 1)."""
    return max(0.0, market.psi_total - 1.0)


def benchmark_utility(market: Market, Q: float | None = None) -> float:
    """Utilidade total do benchmark em Q (padrão: no seu ótimo)."""
    Q = solve_benchmark(market) if Q is None else Q
    return market.psi_total * math.log1p(Q) - Q
