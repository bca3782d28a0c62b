import math
import logging

from modules.model import Flag, Market, Status, reduced_utility
from modules.centralized import (
    DEFAULT_TOL, benchmark_utility, gamma_centralized, solve_benchmark, solve_centralized,
)
from modules.cooperative import DEFAULT_EPSILON, solve_cooperative
from modules.nash import price_of_anarchy, solve_nash, utility_ratio_Gamma
from modules.bargaining import solve_bargaining
from utils.errors import ConfigError
from utils.log_utils import log_result
from utils.validation_utils import to_json_value

logger = logging.getLogger("equilibrio.core")

MODELOS = ("centralized", "cooperative", "nash", "bargaining", "benchmark")


# ======================================================
#  ⚙️  FUNÇÕES AUXILIARES
# ======================================================
def market_from_config(cps) -> Market:
    """[{r, a, b}] (já validado por config_utils) -> Market."""
    return Market.from_rab([cp["r"] for cp in cps], [cp["a"] for cp in cps],
                           [cp["b"] for cp in cps])


def rotulo_mercado(market: Market) -> str:
    return ";".join(f"psi={cp.psi:.6g}/b={cp.b:.6g}" for cp in market.cps)


def _lista(valores) -> list | None:
    return None if valores is None else [float(v) for v in valores]


def _documento_base(modelo: str, market: Market) -> dict:
    return {
        "model": modelo,
        "market": [
            {"cp": n + 1, "r": cp.r, "a": cp.a, "b": cp.b, "psi": cp.psi}
            for n, cp in enumerate(market.cps)
        ],
    }


# ======================================================
#  🧮  DOCUMENTOS POR MODELO (índices 1-based)
# ======================================================
def _centralizado(market: Market, tol: float, epsilon: float) -> dict:
    s = solve_centralized(market, tol)
    return {
        "status": Status.OK.value,
        "Q": s.Q_star,
        "p": _lista(s.p),
        "P": s.P,
        "gamma": s.gamma_C,
        "total_utility": s.total_utility,
        "is_interior": s.is_interior,
    }


def _benchmark(market: Market, tol: float, epsilon: float) -> dict:
    Q = solve_benchmark(market)
    return {
        "status": Status.OK.value,
        "Q": Q,
        "P": 0.0,
        "gamma": Flag.UNDEFINED.value,
        "total_utility": benchmark_utility(market, Q),
    }


def _cooperativo(market: Market, tol: float, epsilon: float) -> dict:
    s = solve_cooperative(market, epsilon, tol)
    doc = {
        "status": s.status.value,
        "Q": s.Q_star,
        "q": _lista(s.q),
        "p": _lista(s.p),
        "P": math.fsum(s.p),
        "total_utility": s.total_utility,
        "utilities": None,
        "caps": _lista(s.caps),
        "binding_constraints": [
            {"cp": n + 1, "deviation": sorted(i + 1 for i in I)}
            for n, I in s.binding_constraints
        ],
    }
    if s.q is not None:
        doc["utilities"] = [reduced_utility(cp, qn, s.Q_star) for cp, qn in zip(market.cps, s.q)]
        doc["gamma"] = gamma_centralized(market, s.Q_star)
    if s.min_margin is not None:
        doc["min_margin"] = s.min_margin
    return doc


def _nash(market: Market, tol: float, epsilon: float) -> dict:
    central = solve_centralized(market, tol)
    s = solve_nash(market)
    return {
        "status": Status.OK.value,
        "Q": s.Q_star,
        "M": [n + 1 for n in s.M],
        "q": _lista(s.q),
        "p": _lista(s.p),
        "P": math.fsum(s.p),
        "utilities": _lista(s.utilities),
        "total_utility": s.total_utility,
        "gamma": s.gamma_N,
        "eta": to_json_value(price_of_anarchy(market, tol, central=central, nash=s)),
        "Gamma": to_json_value(utility_ratio_Gamma(market, tol, central=central, nash=s)),
    }


def _barganha(market: Market, tol: float, epsilon: float) -> dict:
    s = solve_bargaining(market, tol)
    return {
        "status": s.status.value,
        "Q": s.Q_star,
        "q": _lista(s.q),
        "p": _lista(s.p),
        "P": math.fsum(s.p),
        "utilities": _lista(s.utilities),
        "disagreement": _lista(s.disagreement),
        "total_utility": s.total_utility,
        "gamma": s.gamma_B,
        "beta": to_json_value(s.beta),
        "alpha": to_json_value(s.alpha),
        "interior": s.interior,
    }


DESPACHO = {
    "centralized": _centralizado,
    "benchmark": _benchmark,
    "cooperative": _cooperativo,
    "nash": _nash,
    "bargaining": _barganha,
}


# ======================================================
#  🚀  PROCESSAMENTO PRINCIPAL
# ======================================================
def solve_market(market: Market, modelo: str, tol: float = DEFAULT_TOL,
                 epsilon: float = DEFAULT_EPSILON) -> dict:
    """
    Resolve um mercado no modelo pedido e devolve o documento JSON.
    Registra o resultado (ou a falha) no log de operações.
    """
    if modelo not in DESPACHO:
        raise ConfigError("model", f"deve ser um de {', '.join(MODELOS)}")

    rotulo = rotulo_mercado(market)
    try:
        doc = {**_documento_base(modelo, market), **DESPACHO[modelo](market, tol, epsilon)}
    except Exception as e:
        log_result("solve", modelo, rotulo, "ERRO", str(e))
        logger.error(f"❌ Falha ao resolver {modelo} ({rotulo}): {e}")
        raise

    log_result("solve", modelo, rotulo, doc["status"], f"Q={doc['Q']:.12g}")
    logger.info(f"✅ {modelo}: Q = {doc['Q']:.6g} ({doc['status']})")
    return doc
