# =============================================================
# oracle.py
# Oráculos de força bruta (grade) para conferir os solvers
# Avaliam apenas os objetivos diretos: U_n, ΣU_n e Π(U_n − U^D_n).
# Nenhuma forma fechada dos solvers é reutilizada aqui.
# =============================================================

import logging
from dataclasses import dataclass

import numpy as np

from modules.model import CpParams, Market
from utils.errors import DomainError, SizeError

logger = logging.getLogger("equilibrio.oracle")

Q_STEPS = 20001
P_STEPS = 10001
BARGAIN_STEPS = 201
BARGAIN_FINE_STEP = 1e-3
FINE_POINTS = 21            # ±1 passo com resolução 10× maior
CHUNK_CELLS = 2_000_000
MAX_N_CENTRAL = 3


# -------------------------------------------------------------
@dataclass(frozen=True)
class GridSpec:
    lo: float
    hi: float
    steps: int

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"Grade inválida: lo ({self.lo}) >= hi ({self.hi})")
        if self.steps < 2:
            raise DomainError(f"Grade precisa de pelo menos 2 pontos (recebido {self.steps})")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.steps - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def _grid_p(cp: CpParams, grid_p: GridSpec | None, p_steps: int = P_STEPS) -> GridSpec:
    return grid_p or GridSpec(0.0, cp.psi + 1.0, p_steps)


# -------------------------------------------------------------
# BUSCA EM p (vetorizada por blocos de Q)
# -------------------------------------------------------------
def _gross(cp: CpParams, Q_values, grid_p: GridSpec | None = None,
           p_steps: int = P_STEPS) -> tuple[np.ndarray, np.ndarray]:
    """
    Para cada Q: max_p ψ·log(1 + Q + b√p) − p na grade (com um refinamento).
    Retorna (valores, p ótimos).
    """
    grid_p = _grid_p(cp, grid_p, p_steps)
    Qs = np.atleast_1d(np.asarray(Q_values, dtype=float))
    ps = grid_p.points()
    deslocamentos = np.linspace(-1.0, 1.0, FINE_POINTS) * grid_p.step

    valores = np.empty(len(Qs))
    otimos = np.empty(len(Qs))
    bloco = max(1, CHUNK_CELLS // len(ps))

    for ini in range(0, len(Qs), bloco):
        Qb = Qs[ini:ini + bloco, None]
        grossa = cp.psi * np.log1p(Qb + cp.b * np.sqrt(ps[None, :])) - ps[None, :]
        centro = ps[grossa.argmax(axis=1)]

        pf = np.clip(centro[:, None] + deslocamentos[None, :], grid_p.lo, grid_p.hi)
        fina = cp.psi * np.log1p(Qb + cp.b * np.sqrt(pf)) - pf
        j = fina.argmax(axis=1)
        linhas = np.arange(len(Qb))
        valores[ini:ini + bloco] = fina[linhas, j]
        otimos[ini:ini + bloco] = pf[linhas, j]

    return valores, otimos


def _refinar_1d(fn, grid: GridSpec) -> tuple[float, float]:
    """Máximo de `fn` (vetorizada) na grade + uma passada 10× mais fina."""
    xs = grid.points()
    ys = fn(xs)
    centro = xs[int(np.argmax(ys))]
    finos = np.clip(centro + np.linspace(-1.0, 1.0, FINE_POINTS) * grid.step, grid.lo, grid.hi)
    yf = fn(finos)
    k = int(np.argmax(yf))
    return float(finos[k]), float(yf[k])


# -------------------------------------------------------------
def grid_argmax_p(cp: CpParams, Q: float, grid: GridSpec | None = None) -> float:
    """p que maximiza U_n(q, Q, p) por busca em grade."""
    _, otimos = _gross(cp, [Q], grid)
    return float(otimos[0])


def grid_centralized(market: Market, gridQ: GridSpec | None = None,
                     p_steps: int = P_STEPS) -> tuple[float, float]:
    """(Q, utilidade total) maximizando ΣU_n em Q com p de grade por CP."""
    if market.N > MAX_N_CENTRAL:
        raise SizeError(f"Oráculo centralizado limitado a N <= {MAX_N_CENTRAL} (N = {market.N})")
    gridQ = gridQ or GridSpec(0.0, market.psi_total, Q_STEPS)

    def total(Qs):
        return sum(_gross(cp, Qs, p_steps=p_steps)[0] for cp in market.cps) - Qs

    return _refinar_1d(total, gridQ)


def grid_best_response(market: Market, n: int, Q_minus: float,
                       grid: GridSpec | None = None,
                       p_steps: int = P_STEPS) -> float:
    """q que maximiza U_n(q, Q_minus + q, p) na grade."""
    if Q_minus < 0:
        raise DomainError(f"Q_minus deve ser >= 0 (recebido {Q_minus!r})")
    cp = market.cps[n]
    grid = grid or GridSpec(0.0, market.psi_total, Q_STEPS)

    def valor(qs):
        return _gross(cp, Q_minus + qs, p_steps=p_steps)[0] - qs

    q, _ = _refinar_1d(valor, grid)
    return q


# -------------------------------------------------------------
# BARGANHA (N = 2)
# -------------------------------------------------------------
def _produto_grade(market: Market, q1: np.ndarray, q2: np.ndarray,
                   ud: np.ndarray, p_steps: int) -> np.ndarray:
    """Π(U_n − U^D_n) na grade q1 × q2 (0 fora da região individualmente racional)."""
    Q = q1[:, None] + q2[None, :]
    # grades uniformes: q1 + q2 assume poucos valores distintos
    Q_unicos, inverso = np.unique(np.round(Q, 12), return_inverse=True)
    gross = [_gross(cp, Q_unicos, p_steps=p_steps)[0][inverso].reshape(Q.shape) for cp in market.cps]
    ganho1 = gross[0] - q1[:, None] - ud[0]
    ganho2 = gross[1] - q2[None, :] - ud[1]
    return np.where((ganho1 > 0) & (ganho2 > 0), ganho1 * ganho2, 0.0)


def grid_bargaining(market: Market, grid: GridSpec | None = None,
                    p_steps: int = P_STEPS) -> tuple[tuple[float, float], float]:
    """
    Maximiza o produto de Nash numa grade (q1, q2): grade grossa e depois
    janela de ±2 passos com passo 1e-3. Retorna ((q1, q2), produto).
    """
    if market.N != 2:
        raise SizeError(f"Oráculo de barganha só para N = 2 (N = {market.N})")
    grid = grid or GridSpec(0.0, market.psi_total, BARGAIN_STEPS)
    ud = np.array([_gross(cp, [0.0], p_steps=p_steps)[0][0] for cp in market.cps])

    eixo = grid.points()
    prod = _produto_grade(market, eixo, eixo, ud, p_steps)
    i, j = np.unravel_index(int(np.argmax(prod)), prod.shape)
    if prod[i, j] <= 0:
        logger.info("🔍 Produto de Nash não positivo na grade: ponto de desacordo")
        return (0.0, 0.0), 0.0

    def janela(centro: float) -> np.ndarray:
        lo = max(grid.lo, centro - 2 * grid.step)
        hi = min(grid.hi, centro + 2 * grid.step)
        n = int(round((hi - lo) / BARGAIN_FINE_STEP)) + 1
        return lo + BARGAIN_FINE_STEP * np.arange(n)

    f1, f2 = janela(eixo[i]), janela(eixo[j])
    fino = _produto_grade(market, f1, f2, ud, p_steps)
    a, b = np.unravel_index(int(np.argmax(fino)), fino.shape)
    if fino[a, b] < prod[i, j]:
        return (float(eixo[i]), float(eixo[j])), float(prod[i, j])
    return (float(f1[a]), float(f2[b])), float(fino[a, b])
