# =============================================================
# experiments.py
# Varreduras comparativas (δ e grade ψ1 × ψ2) e presets de figuras
# Saída: linhas tabulares para CSV / JSON
# =============================================================

import csv
import json
import math
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

from modules.model import Flag, Market, Status, reduced_utility
from modules.centralized import DEFAULT_TOL, benchmark_utility, solve_benchmark, solve_centralized
from modules.cooperative import DEFAULT_EPSILON, solve_cooperative
from modules.nash import price_of_anarchy, solve_nash, utility_ratio_Gamma
from modules.bargaining import solve_bargaining
from utils.config_utils import threads
from utils.errors import ConfigError
from utils.file_utils import ensure_parent
from utils.validation_utils import format_num, to_json_value

logger = logging.getLogger("equilibrio.experiments")

MODELOS = ("centralized", "cooperative", "nash", "bargaining", "benchmark")
METRICAS = ("eta", "gamma_N", "Gamma", "beta", "gamma_B", "alpha")
MODELOS_GRADE = ("nash", "bargaining")

CSV_HEADER = [
    "model", "b1", "b2", "delta", "psi1", "psi2", "Q", "P", "gamma",
    "total_utility", "eta", "Gamma", "beta", "alpha", "status",
]

DELTA_GRID = tuple(round(0.05 * k, 10) for k in range(31))        # 0 .. 1.5
PSI_GRID = tuple(round(0.25 * k, 10) for k in range(1, 21))       # 0.25 .. 5.0


# =============================================================
# CONFIGURAÇÕES
# =============================================================
def _lista_num(campo: str, valores, minimo: float | None = None, estrito: bool = False) -> tuple[float, ...]:
    if not isinstance(valores, (list, tuple)) or not valores:
        raise ConfigError(campo, "lista não vazia esperada")
    saida = []
    for i, v in enumerate(valores):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ConfigError(f"{campo}[{i}]", f"número finito esperado, recebido {v!r}")
        if minimo is not None and (v <= minimo if estrito else v < minimo):
            raise ConfigError(f"{campo}[{i}]", f"deve ser {'>' if estrito else '>='} {minimo}")
        saida.append(float(v))
    return tuple(saida)


def _subconjunto(campo: str, valores, universo: tuple[str, ...]) -> tuple[str, ...]:
    if not isinstance(valores, (list, tuple)) or not valores:
        raise ConfigError(campo, "lista não vazia esperada")
    for i, v in enumerate(valores):
        if v not in universo:
            raise ConfigError(f"{campo}[{i}]", f"deve ser um de {', '.join(universo)}")
    return tuple(valores)


@dataclass(frozen=True)
class DeltaSweepConfig:
    """ψ_n = c·n^(−δ) para cada δ da grade e cada vetor b."""
    N: int = 2
    c: float = 2.0
    delta_grid: tuple[float, ...] = DELTA_GRID
    b_vectors: tuple[tuple[float, ...], ...] = ((1.0, 1.0),)
    models: tuple[str, ...] = ("centralized",)

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 1:
            raise ConfigError("N", "inteiro >= 1 esperado")
        if isinstance(self.c, bool) or not isinstance(self.c, (int, float)) or not self.c > 0:
            raise ConfigError("c", "deve ser > 0")
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "delta_grid", _lista_num("delta_grid", self.delta_grid, minimo=0.0))
        if not isinstance(self.b_vectors, (list, tuple)) or not self.b_vectors:
            raise ConfigError("b_vectors", "lista não vazia esperada")
        bs = []
        for i, b in enumerate(self.b_vectors):
            b = _lista_num(f"b_vectors[{i}]", b, minimo=1.0)
            if len(b) != self.N:
                raise ConfigError(f"b_vectors[{i}]", f"tamanho {len(b)} diferente de N = {self.N}")
            bs.append(b)
        object.__setattr__(self, "b_vectors", tuple(bs))
        object.__setattr__(self, "models", _subconjunto("models", self.models, MODELOS))


@dataclass(frozen=True)
class PsiGridConfig:
    """Grade (ψ1, ψ2) com N = 2 e vetor b fixo."""
    psi1_grid: tuple[float, ...] = PSI_GRID
    psi2_grid: tuple[float, ...] = PSI_GRID
    b_vector: tuple[float, ...] = (1.0, 1.0)
    metrics: tuple[str, ...] = ("eta",)
    model: str = "nash"

    def __post_init__(self):
        object.__setattr__(self, "psi1_grid", _lista_num("psi1_grid", self.psi1_grid, minimo=0.0, estrito=True))
        object.__setattr__(self, "psi2_grid", _lista_num("psi2_grid", self.psi2_grid, minimo=0.0, estrito=True))
        b = _lista_num("b_vector", self.b_vector, minimo=1.0)
        if len(b) != 2:
            raise ConfigError("b_vector", "exatamente 2 valores esperados")
        object.__setattr__(self, "b_vector", b)
        object.__setattr__(self, "metrics", _subconjunto("metrics", self.metrics, METRICAS))
        if self.model not in MODELOS_GRADE:
            raise ConfigError("model", f"deve ser um de {', '.join(MODELOS_GRADE)}")


def sweep_from_dict(dados: dict, campo: str = "sweep") -> DeltaSweepConfig | PsiGridConfig:
    """Monta a configuração de varredura de um objeto JSON (`kind`: delta | psi)."""
    if not isinstance(dados, dict):
        raise ConfigError(campo, "objeto esperado")
    dados = dict(dados)
    kind = dados.pop("kind", None)
    classes = {"delta": DeltaSweepConfig, "psi": PsiGridConfig}
    if kind not in classes:
        raise ConfigError(f"{campo}.kind", "deve ser 'delta' ou 'psi'")
    cls = classes[kind]
    for chave in dados:
        if chave not in cls.__dataclass_fields__:
            raise ConfigError(f"{campo}.{chave}", "campo desconhecido")
    try:
        return cls(**dados)
    except ConfigError as e:
        raise ConfigError(f"{campo}.{e.campo}", e.mensagem) from e


# -------------------------------------------------------------
# PRESETS
# -------------------------------------------------------------
_B4 = ((1.0, 1.0), (1.0, 2.0), (2.0, 1.0), (2.0, 2.0))
_B3 = ((1.0, 1.0), (1.0, 2.0), (2.0, 2.0))

PRESETS = {
    "fig2": (DeltaSweepConfig(N=2, c=2.0, b_vectors=_B4, models=("centralized", "benchmark")),),
    "fig3": (DeltaSweepConfig(N=2, c=7.0, b_vectors=((1.0, 1.0), (2.0, 1.0)),
                              models=("centralized", "cooperative")),),
    "fig45": tuple(PsiGridConfig(b_vector=b, metrics=("eta", "gamma_N", "Gamma"), model="nash")
                   for b in ((1.0, 1.0), (2.0, 2.0))),
    "fig67": tuple(PsiGridConfig(b_vector=b, metrics=("beta", "gamma_B"), model="bargaining")
                   for b in _B3),
    "fig8": tuple(PsiGridConfig(b_vector=b, metrics=("alpha",), model="bargaining")
                  for b in _B3),
}


# =============================================================
# LINHAS
# =============================================================
@dataclass(frozen=True)
class SweepRow:
    model: str
    b: tuple[float, ...]
    psi: tuple[float, ...]
    delta: float | None = None
    Q: float | None = None
    P: float | None = None
    gamma: float | Flag | None = None
    total_utility: float | None = None
    eta: float | Flag | None = None
    Gamma: float | Flag | None = None
    beta: float | Flag | None = None
    alpha: float | Flag | None = None
    status: Status = Status.OK
    utilities: tuple[float, ...] | None = None
    gamma_N: float | None = None
    gamma_B: float | None = None

    def csv_row(self) -> list[str]:
        def idx(valores, i):
            return valores[i] if len(valores) > i else None

        valores = [
            idx(self.b, 0), idx(self.b, 1), self.delta,
            idx(self.psi, 0), idx(self.psi, 1), self.Q, self.P, self.gamma,
            self.total_utility, self.eta, self.Gamma, self.beta, self.alpha, self.status,
        ]
        return [self.model] + [format_num(v) for v in valores]

    def to_json(self) -> dict:
        return {
            "model": self.model,
            "b": list(self.b),
            "psi": list(self.psi),
            "delta": self.delta,
            "Q": self.Q,
            "P": self.P,
            "gamma": to_json_value(self.gamma),
            "total_utility": self.total_utility,
            "utilities": list(self.utilities) if self.utilities is not None else None,
            "eta": to_json_value(self.eta),
            "Gamma": to_json_value(self.Gamma),
            "beta": to_json_value(self.beta),
            "alpha": to_json_value(self.alpha),
            "gamma_N": self.gamma_N,
            "gamma_B": self.gamma_B,
            "status": self.status.value,
        }


class _Ponto:
    """Um mercado da varredura; cada solver roda no máximo uma vez."""

    def __init__(self, market: Market, tol: float, epsilon: float):
        self.market = market
        self.tol = tol
        self.epsilon = epsilon

    @cached_property
    def central(self):
        return solve_centralized(self.market, self.tol)

    @cached_property
    def nash(self):
        return solve_nash(self.market)

    @cached_property
    def bargain(self):
        return solve_bargaining(self.market, self.tol, central=self.central, nash=self.nash)

    @cached_property
    def cooperative(self):
        return solve_cooperative(self.market, self.epsilon, self.tol)

    def eta(self):
        return price_of_anarchy(self.market, central=self.central, nash=self.nash)

    def Gamma(self):
        return utility_ratio_Gamma(self.market, central=self.central, nash=self.nash)

    # ---------------------------------------------------------
    def linha(self, model: str, **coords) -> SweepRow:
        m = self.market
        base = dict(model=model, b=tuple(m.b.tolist()), psi=tuple(m.psi.tolist()), **coords)

        if model == "centralized":
            c = self.central
            return SweepRow(**base, Q=c.Q_star, P=c.P, gamma=c.gamma_C,
                            total_utility=c.total_utility)
        if model == "benchmark":
            Q = solve_benchmark(m)
            return SweepRow(**base, Q=Q, P=0.0, gamma=Flag.UNDEFINED,
                            total_utility=benchmark_utility(m, Q))
        if model == "cooperative":
            s = self.cooperative
            utilities = None
            if s.q is not None:
                utilities = tuple(reduced_utility(cp, qn, s.Q_star) for cp, qn in zip(m.cps, s.q))
            return SweepRow(**base, Q=s.Q_star, P=math.fsum(s.p), gamma=self.central.gamma_C,
                            total_utility=s.total_utility, status=s.status, utilities=utilities)
        if model == "nash":
            n = self.nash
            return SweepRow(**base, Q=n.Q_star, P=math.fsum(n.p), gamma=n.gamma_N,
                            total_utility=n.total_utility, eta=self.eta(), Gamma=self.Gamma(),
                            utilities=n.utilities, gamma_N=n.gamma_N)
        if model == "bargaining":
            bs = self.bargain
            return SweepRow(**base, Q=bs.Q_star, P=math.fsum(bs.p), gamma=bs.gamma_B,
                            total_utility=bs.total_utility, beta=bs.beta, alpha=bs.alpha,
                            status=bs.status, utilities=bs.utilities, gamma_B=bs.gamma_B)
        raise ConfigError("model", f"modelo desconhecido: {model!r}")

    def linha_grade(self, cfg: PsiGridConfig) -> SweepRow:
        """Linha da grade ψ: colunas do modelo + apenas as métricas pedidas."""
        row = self.linha(cfg.model)
        metricas = {k: None for k in ("eta", "Gamma", "beta", "alpha")}
        extras = {"gamma_N": None, "gamma_B": None}
        for nome in cfg.metrics:
            if nome == "eta":
                metricas["eta"] = self.eta()
            elif nome == "Gamma":
                metricas["Gamma"] = self.Gamma()
            elif nome == "beta":
                metricas["beta"] = self.bargain.beta
            elif nome == "alpha":
                metricas["alpha"] = self.bargain.alpha
            elif nome == "gamma_N":
                extras["gamma_N"] = self.nash.gamma_N
            elif nome == "gamma_B":
                extras["gamma_B"] = self.bargain.gamma_B
        return SweepRow(
            model=row.model, b=row.b, psi=row.psi, Q=row.Q, P=row.P, gamma=row.gamma,
            total_utility=row.total_utility, status=row.status, utilities=row.utilities,
            **metricas, **extras,
        )


# =============================================================
# EXECUÇÃO
# =============================================================
def _mapear(fn, tarefas: list) -> list:
    """Avalia em paralelo (INVEST_EQ_THREADS) preservando a ordem das tarefas."""
    n = min(threads(), max(len(tarefas), 1))
    if n <= 1:
        return [fn(t) for t in tarefas]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, tarefas))


def run_delta_sweep(cfg: DeltaSweepConfig, tol: float = DEFAULT_TOL,
                    epsilon: float = DEFAULT_EPSILON) -> list[SweepRow]:
    """Uma linha por (vetor b, δ, modelo), nessa ordem."""
    tarefas = [(b, d) for b in cfg.b_vectors for d in cfg.delta_grid]

    def avaliar(tarefa):
        b, d = tarefa
        psi = [cfg.c * n ** (-d) for n in range(1, cfg.N + 1)]
        ponto = _Ponto(Market.from_psi(psi, b), tol, epsilon)
        return [ponto.linha(model, delta=d) for model in cfg.models]

    rows = [r for grupo in _mapear(avaliar, tarefas) for r in grupo]
    logger.info(f"📊 Varredura δ (c = {cfg.c:g}): {len(rows)} linhas")
    return rows


def run_psi_grid(cfg: PsiGridConfig, tol: float = DEFAULT_TOL) -> list[SweepRow]:
    """Uma linha por (ψ1, ψ2), ψ1 variando mais devagar."""
    tarefas = [(p1, p2) for p1 in cfg.psi1_grid for p2 in cfg.psi2_grid]

    def avaliar(tarefa):
        p1, p2 = tarefa
        ponto = _Ponto(Market.from_psi([p1, p2], cfg.b_vector), tol, DEFAULT_EPSILON)
        return ponto.linha_grade(cfg)

    rows = _mapear(avaliar, tarefas)
    logger.info(f"📊 Grade ψ (b = {list(cfg.b_vector)}): {len(rows)} linhas")
    return rows


def run_sweep(cfg: DeltaSweepConfig | PsiGridConfig, tol: float = DEFAULT_TOL,
              epsilon: float = DEFAULT_EPSILON) -> list[SweepRow]:
    if isinstance(cfg, DeltaSweepConfig):
        return run_delta_sweep(cfg, tol, epsilon)
    return run_psi_grid(cfg, tol)


def run_preset(nome: str, tol: float = DEFAULT_TOL,
               epsilon: float = DEFAULT_EPSILON) -> list[SweepRow]:
    """Executa todas as configurações de um preset (fig2, fig3, fig45, fig67, fig8)."""
    if nome not in PRESETS:
        raise ConfigError("preset", f"preset desconhecido: {nome!r}")
    return [r for cfg in PRESETS[nome] for r in run_sweep(cfg, tol, epsilon)]


# =============================================================
# SAÍDA
# =============================================================
def write_csv(rows: list[SweepRow], path: str) -> str:
    """CSV com cabeçalho fixo; flags como strings, números com 12 dígitos."""
    try:
        with open(ensure_parent(path), "w", newline="", encoding="utf-8") as fp:
            writer = csv.writer(fp, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(r.csv_row() for r in rows)
    except OSError as e:
        raise OSError(f"Falha ao gravar CSV em {path}: {e}") from e
    return path


def write_json(rows: list[SweepRow], path: str) -> str:
    try:
        with open(ensure_parent(path), "w", encoding="utf-8") as fp:
            json.dump([r.to_json() for r in rows], fp, indent=2)
            fp.write("\n")
    except OSError as e:
        raise OSError(f"Falha ao gravar JSON em {path}: {e}") from e
    return path
