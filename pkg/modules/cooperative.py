# =============================================================
# cooperative.py
# Jogo cooperativo estratégico: estabilidade da grande coalizão
#   - Q(I): ótimo centralizado do sub-mercado que investe
#   - desvios de cada CP contra todos os subconjuntos próprios
#   - tetos por CP e divisão com folga igualada
# =============================================================

import math
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from modules.model import (
    Market, Status, assumption_1_holds, f_of_Q, marginal_public_utility,
    p_star, reduced_utility,
)
from modules.centralized import DEFAULT_TOL, solve_centralized
from modules.bargaining import disagreement_utility, surplus
from utils.errors import ContractError, DomainError, SizeError
from utils.numeric_utils import water_fill

logger = logging.getLogger("equilibrio.cooperative")

CoalitionSet = frozenset

DEFAULT_EPSILON = 1e-6
MAX_N_EXHAUSTIVE = 12
MAX_N_PRUNED = 16


# -------------------------------------------------------------
@dataclass(frozen=True)
class StabilityMargin:
    n: int
    I: CoalitionSet
    margin: float


@dataclass(frozen=True)
class CooperativeSolution:
    status: Status
    q: tuple[float, ...] | None
    p: tuple[float, ...]
    Q_star: float
    total_utility: float | None
    caps: tuple[float, ...]
    binding_constraints: tuple[tuple[int, CoalitionSet], ...]
    min_margin: float | None = None


# -------------------------------------------------------------
# VALOR DAS COALIZÕES
# -------------------------------------------------------------
@lru_cache(maxsize=8192)
def _valor(market: Market, membros: tuple[int, ...], tol: float) -> float:
    if not membros:
        return 0.0
    if len(membros) == 1:
        cp = market.cps[membros[0]]
        return max(0.0, cp.psi - cp.b * cp.b / 2.0 - 1.0)
    return solve_centralized(market.sub(membros), tol).Q_star


def coalition_value(market: Market, I, tol: float = DEFAULT_TOL) -> float:
    """Q(I): investimento público total ótimo quando só os membros de I investem."""
    membros = tuple(sorted(I))
    if membros and (membros[0] < 0 or membros[-1] >= market.N):
        raise DomainError(f"Coalizão {set(I)} fora dos índices do mercado (N = {market.N})")
    return _valor(market, membros, tol)


@lru_cache(maxsize=8192)
def _divisao(market: Market, membros: tuple[int, ...], tol: float) -> dict[int, float]:
    """Divisão de Q(I) entre os membros: folga igual sobre o desacordo."""
    Q_I = _valor(market, membros, tol)
    if len(membros) == 1:
        return {membros[0]: Q_I}
    if Q_I == 0:
        return {n: 0.0 for n in membros}
    S = [surplus(market.cps[n], Q_I, disagreement_utility(market.cps[n])) for n in membros]
    resultado = water_fill(S, Q_I)
    if resultado is None:
        # ΣS(Q(I)) <= Q(I) só ocorre em Q(I) = 0
        logger.warning(f"⚠️ Sub-coalizão {membros} sem divisão viável; usando divisão igual")
        return {n: Q_I / len(membros) for n in membros}
    q, _ = resultado
    return {n: float(x) for n, x in zip(membros, q)}


def deviation_utility(market: Market, n: int, I, tol: float = DEFAULT_TOL) -> float:
    """Melhor utilidade de CP n quando o conjunto que investe é I."""
    Q_I = coalition_value(market, I, tol)
    cp = market.cps[n]
    if n not in I:
        return reduced_utility(cp, 0.0, Q_I)
    q_n = _divisao(market, tuple(sorted(I)), tol)[n]
    return reduced_utility(cp, q_n, Q_I)


# -------------------------------------------------------------
# ENUMERAÇÃO
# -------------------------------------------------------------
def deviation_sets(market: Market) -> list[CoalitionSet]:
    """
    Subconjuntos próprios (inclui ∅) por cardinalidade e ordem lexicográfica.
    Com ψ estritamente decrescente e b não decrescente, os singletons
    {i}, i >= 1, são descartados.
    """
    N = market.N
    podar = assumption_1_holds(market) and N > 1
    limite = MAX_N_PRUNED if podar else MAX_N_EXHAUSTIVE
    if N > limite:
        raise SizeError(f"N = {N} excede o limite de enumeração ({limite})")

    conjuntos = []
    for k in range(N):
        for combo in combinations(range(N), k):
            if podar and k == 1 and combo[0] >= 1:
                continue
            conjuntos.append(CoalitionSet(combo))
    return conjuntos


def lemma3_incentive(market: Market, i: int, m: int, tol: float = DEFAULT_TOL) -> float:
    """∂U_m/∂q_m em q_m = 0 quando só {i} investe (Q = Q({i}))."""
    return marginal_public_utility(market.cps[m], coalition_value(market, {i}, tol))


# -------------------------------------------------------------
# ESTABILIDADE
# -------------------------------------------------------------
def stability_margins(market: Market, q, tol: float = DEFAULT_TOL) -> list[StabilityMargin]:
    """Margem U_n(grande coalizão) − U_n(desvio I) para cada CP e cada I."""
    q = [float(x) for x in q]
    if len(q) != market.N:
        raise ContractError(f"q com {len(q)} entradas para N = {market.N}")
    if any(x <= 0 for x in q):
        raise ContractError("Grande coalizão exige q_n > 0 para todo n")
    Q = math.fsum(q)
    grande = [reduced_utility(cp, qn, Q) for cp, qn in zip(market.cps, q)]

    margens = []
    for n in range(market.N):
        for I in deviation_sets(market):
            margens.append(StabilityMargin(n, I, grande[n] - deviation_utility(market, n, I, tol)))
    return margens


def _pior_desvio(market: Market, n: int, conjuntos, tol: float) -> tuple[float, CoalitionSet]:
    valores = [(deviation_utility(market, n, I, tol), I) for I in conjuntos]
    # empates resolvidos pela ordem de enumeração
    melhor = max(v for v, _ in valores)
    return melhor, next(I for v, I in valores if v == melhor)


def solve_cooperative(market: Market, epsilon: float = DEFAULT_EPSILON,
                      tol: float = DEFAULT_TOL) -> CooperativeSolution:
    """
    Procura divisão q de Q_C* com q_n >= epsilon e todas as margens > 0.
    Núcleo vazio é devolvido como Status.INFEASIBLE.
    """
    if not (epsilon > 0 and math.isfinite(epsilon)):
        raise DomainError(f"epsilon deve ser > 0 (recebido {epsilon!r})")

    central = solve_centralized(market, tol)
    Q_C = central.Q_star
    conjuntos = deviation_sets(market)

    caps, binding = [], []
    for n, cp in enumerate(market.cps):
        pior, I = _pior_desvio(market, n, conjuntos, tol)
        caps.append(cp.psi * f_of_Q(cp, Q_C) - p_star(cp, Q_C) - pior)
        binding.append((n, I))
    caps_arr = np.array(caps)

    viavel = (
        Q_C > 0
        and bool(np.all(caps_arr > epsilon))
        and math.fsum(caps) > Q_C
        and market.N * epsilon <= Q_C
    )
    if not viavel:
        logger.info(
            f"🚫 Núcleo vazio: Q_C = {Q_C:.6g}, Σcap = {math.fsum(caps):.6g}, "
            f"tetos = {[round(c, 6) for c in caps]}"
        )
        for n, I in binding:
            logger.info(f"   CP {n + 1} prefere desviar para I = {sorted(i + 1 for i in I)}")
        return CooperativeSolution(
            status=Status.INFEASIBLE,
            q=None,
            p=central.p,
            Q_star=Q_C,
            total_utility=None,
            caps=tuple(caps),
            binding_constraints=tuple(binding),
        )

    resto = Q_C - market.N * epsilon
    resultado = water_fill(caps_arr - epsilon, resto)
    q = tuple(float(epsilon + x) for x in resultado[0])
    utilities = [reduced_utility(cp, qn, Q_C) for cp, qn in zip(market.cps, q)]
    min_margin = min(c - qn for c, qn in zip(caps, q))
    logger.info(f"✅ Grande coalizão estável: q = {[round(x, 6) for x in q]}, margem mínima {min_margin:.3g}")

    return CooperativeSolution(
        status=Status.OK,
        q=q,
        p=central.p,
        Q_star=Q_C,
        total_utility=math.fsum(utilities),
        caps=tuple(caps),
        binding_constraints=tuple(binding),
        min_margin=min_margin,
    )
