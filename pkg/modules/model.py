# =============================================================
# model.py
# Primitivas do jogo de investimento público/privado dos CPs
#   U_n = r·a·log(1 + Q + b·√p) − (p + q)
# =============================================================

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from utils.errors import ContractError, DomainError, ShapeError
from utils.validation_utils import check_finite, check_nonneg

# folga relativa aceita em Q >= q (soma em ponto flutuante)
CONTRACT_SLACK = 1e-12


# -------------------------------------------------------------
# FLAGS / STATUS
# -------------------------------------------------------------
class Flag(str, Enum):
    """Resultado escalar sem valor numérico."""
    UNBOUNDED = "unbounded"
    UNDEFINED = "undefined"


class Status(str, Enum):
    OK = "ok"
    INFEASIBLE = "infeasible"
    DEGENERATE = "degenerate"


# -------------------------------------------------------------
# TIPOS
# -------------------------------------------------------------
@dataclass(frozen=True)
class CpParams:
    """Um CP: receita por tráfego r, escala de ganho a e eficiência privada b."""
    r: float
    a: float
    b: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "r", check_nonneg("r", self.r))
        object.__setattr__(self, "a", check_nonneg("a", self.a))
        b = check_finite("b", self.b)
        if b < 1:
            raise DomainError(f"b deve ser >= 1 (recebido {b!r})")
        object.__setattr__(self, "b", b)

    @property
    def psi(self) -> float:
        return self.r * self.a

    @classmethod
    def from_psi(cls, psi: float, b: float = 1.0) -> CpParams:
        return cls(r=psi, a=1.0, b=b)


@dataclass(frozen=True)
class Market:
    cps: tuple[CpParams, ...]

    def __post_init__(self):
        cps = tuple(self.cps)
        if not cps:
            raise ShapeError("Mercado precisa de pelo menos um CP")
        for i, cp in enumerate(cps):
            if cp.r <= 0 or cp.a <= 0:
                raise DomainError(f"CP {i + 1}: r e a devem ser > 0 (psi = {cp.psi!r})")
        object.__setattr__(self, "cps", cps)

    @property
    def N(self) -> int:
        return len(self.cps)

    @property
    def psi(self) -> np.ndarray:
        return np.array([cp.psi for cp in self.cps])

    @property
    def b(self) -> np.ndarray:
        return np.array([cp.b for cp in self.cps])

    @property
    def psi_total(self) -> float:
        return math.fsum(cp.psi for cp in self.cps)

    def sub(self, indices: Sequence[int]) -> Market:
        """Sub-mercado restrito aos CPs `indices` (mesma ordem)."""
        return Market(tuple(self.cps[i] for i in sorted(indices)))

    @classmethod
    def from_psi(cls, psi: Sequence[float], b: Sequence[float] | None = None) -> Market:
        b = [1.0] * len(psi) if b is None else list(b)
        if len(b) != len(psi):
            raise ShapeError(f"psi ({len(psi)}) e b ({len(b)}) com tamanhos diferentes")
        return cls(tuple(CpParams.from_psi(x, y) for x, y in zip(psi, b)))

    @classmethod
    def from_rab(cls, r: Sequence[float], a: Sequence[float], b: Sequence[float]) -> Market:
        if not (len(r) == len(a) == len(b)):
            raise ShapeError(f"r, a, b com tamanhos diferentes ({len(r)}, {len(a)}, {len(b)})")
        return cls(tuple(CpParams(x, y, z) for x, y, z in zip(r, a, b)))


@dataclass(frozen=True)
class Allocation:
    q: tuple[float, ...]
    p: tuple[float, ...]

    def __post_init__(self):
        if len(self.q) != len(self.p):
            raise ShapeError(f"q ({len(self.q)}) e p ({len(self.p)}) com tamanhos diferentes")
        object.__setattr__(self, "q", tuple(check_nonneg(f"q[{i}]", v) for i, v in enumerate(self.q)))
        object.__setattr__(self, "p", tuple(check_nonneg(f"p[{i}]", v) for i, v in enumerate(self.p)))

    @property
    def Q(self) -> float:
        return math.fsum(self.q)

    @property
    def P(self) -> float:
        return math.fsum(self.p)


@dataclass(frozen=True)
class Outcome:
    Q: float
    P: float
    gamma: float | Flag
    utilities: tuple[float, ...]
    total_utility: float


# -------------------------------------------------------------
# FÓRMULAS
# -------------------------------------------------------------
def _raiz(cp: CpParams, Q: float) -> tuple[float, float]:
    """(s, t) com s = √((1+Q)² + 2b²ψ) e t = 1 + Q."""
    t = 1.0 + Q
    return math.sqrt(t * t + 2.0 * cp.b * cp.b * cp.psi), t


def _gap(cp: CpParams, Q: float) -> float:
    # s − t sem cancelamento: 2b²ψ / (s + t)
    s, t = _raiz(cp, Q)
    return 2.0 * cp.b * cp.b * cp.psi / (s + t)


def consumption_gain(cp: CpParams, Q: float, p: float) -> float:
    """g(Q + h(p)) = a·log(1 + Q + b√p)."""
    Q = check_nonneg("Q", Q)
    p = check_nonneg("p", p)
    return cp.a * math.log1p(Q + cp.b * math.sqrt(p))


def utility(cp: CpParams, q: float, Q: float, p: float) -> float:
    """Utilidade líquida do CP; Q é o total do mercado, incluindo o próprio q."""
    q = check_nonneg("q", q)
    Q = check_nonneg("Q", Q)
    p = check_nonneg("p", p)
    if q > Q * (1 + CONTRACT_SLACK):
        raise ContractError(f"Q ({Q!r}) menor que o próprio q ({q!r})")
    return cp.psi * math.log1p(Q + cp.b * math.sqrt(p)) - (p + q)


def p_star(cp: CpParams, Q: float) -> float:
    """Investimento privado ótimo dado Q (ψ = 0 devolve 0)."""
    Q = check_nonneg("Q", Q)
    return (_gap(cp, Q) / (2.0 * cp.b)) ** 2


def f_of_Q(cp: CpParams, Q: float) -> float:
    Q = check_nonneg("Q", Q)
    s, t = _raiz(cp, Q)
    return math.log((s + t) / 2.0)


def reduced_utility(cp: CpParams, q: float, Q: float) -> float:
    """Utilidade com p no ótimo: ψ·f(Q) − p*(Q) − q."""
    q = check_nonneg("q", q)
    Q = check_nonneg("Q", Q)
    if q > Q * (1 + CONTRACT_SLACK):
        raise ContractError(f"Q ({Q!r}) menor que o próprio q ({q!r})")
    return cp.psi * f_of_Q(cp, Q) - p_star(cp, Q) - q


def surplus_slope(cp: CpParams, Q: float) -> float:
    """d/dQ [ψ·f(Q) − p*(Q)] = (s − t)/b²."""
    Q = check_nonneg("Q", Q)
    return _gap(cp, Q) / (cp.b * cp.b)


def marginal_public_utility(cp: CpParams, Q: float) -> float:
    """∂U/∂q com p = p*(Q); positivo em Q = 0 sse ψ − b²/2 > 1."""
    return surplus_slope(cp, Q) - 1.0


def assumption_1_holds(market: Market) -> bool:
    """ψ estritamente decrescente e b não decrescente na ordem do mercado."""
    cps = market.cps
    return all(
        cps[i].psi > cps[i + 1].psi and cps[i].b <= cps[i + 1].b
        for i in range(len(cps) - 1)
    )


# -------------------------------------------------------------
def evaluate(market: Market, alloc: Allocation) -> Outcome:
    """Agrega uma alocação (q, p) em Q, P, γ e utilidades."""
    if len(alloc.q) != market.N:
        raise ShapeError(f"Alocação com {len(alloc.q)} CPs para mercado com {market.N}")
    Q, P = alloc.Q, alloc.P
    utilities = tuple(
        utility(cp, q, Q, p) for cp, q, p in zip(market.cps, alloc.q, alloc.p)
    )
    gamma = Q / P if P > 0 else Flag.UNDEFINED
    return Outcome(Q=Q, P=P, gamma=gamma, utilities=utilities,
                   total_utility=math.fsum(utilities))
