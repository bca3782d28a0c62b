# =============================================================
# numeric_utils.py
# Rotinas numéricas compartilhadas pelos solvers
#   - bisseção (scipy.optimize.bisect)
#   - seção áurea para maximização em intervalo fechado
#   - water-filling (nível comum por bisseção)
# =============================================================

import math
from typing import Callable

import numpy as np
from scipy import optimize

from utils.errors import DomainError

INV_PHI = (math.sqrt(5) - 1) / 2       # 1/phi
INV_PHI_SQ = (3 - math.sqrt(5)) / 2    # 1/phi^2
MAX_ITER = 200


# -------------------------------------------------------------
def bisect_root(fn: Callable[[float], float], lo: float, hi: float,
                xtol: float = 1e-12, maxiter: int = MAX_ITER) -> float:
    """
    Raiz de `fn` em [lo, hi] por bisseção; exige troca de sinal nas pontas.
    Devolve a ponta exata quando ela já é raiz.
    """
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise DomainError(f"Sem troca de sinal em [{lo}, {hi}] ({f_lo}, {f_hi})")
    return float(optimize.bisect(fn, lo, hi, xtol=xtol, maxiter=maxiter))


# -------------------------------------------------------------
def golden_section_max(obj: Callable[[float], float], a: float, b: float,
                       tol: float = 1e-10) -> tuple[float, float, float]:
    """
    Seção áurea para máximo de função unimodal em [a, b].
    Retorna (x*, a_final, b_final): o ponto e o bracket final.
    """
    dist = b - a
    if dist <= tol:
        return (a + b) / 2, a, b

    n = int(math.ceil(math.log(tol / dist) / math.log(INV_PHI)))

    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc = obj(c)
    yd = obj(d)

    for _ in range(max(n - 1, 0)):
        if yc > yd:
            b = d
            d = c
            yd = yc
            dist = INV_PHI * dist
            c = a + INV_PHI_SQ * dist
            yc = obj(c)
        else:
            a = c
            c = d
            yc = yd
            dist = INV_PHI * dist
            d = a + INV_PHI * dist
            yd = obj(d)

    if yc > yd:
        return (a + d) / 2, a, d
    return (c + b) / 2, c, b


# -------------------------------------------------------------
def water_fill(surpluses, total: float, xtol: float = 1e-12) -> tuple[np.ndarray, float] | None:
    """
    Encontra nível c > 0 com sum(max(0, S_n - c)) = total e devolve
    (q, c) com q_n = max(0, S_n - c). None quando não existe c > 0
    (sum(max(S, 0)) <= total).
    """
    S = np.asarray(surpluses, dtype=float)
    if total < 0 or not math.isfinite(total):
        raise DomainError(f"Total inválido para water-filling: {total!r}")
    positivos = np.maximum(S, 0.0)
    if positivos.sum() <= total:
        return None
    if total == 0:
        return np.zeros_like(S), float(S.max())

    def excesso(c: float) -> float:
        return float(np.maximum(S - c, 0.0).sum() - total)

    nivel = bisect_root(excesso, 0.0, float(S.max()), xtol=xtol)

    # fecha a soma exatamente dentro do conjunto ativo
    ativos = S > nivel
    if ativos.any():
        nivel = float((S[ativos].sum() - total) / ativos.sum())
    q = np.maximum(S - nivel, 0.0)
    return q, nivel
