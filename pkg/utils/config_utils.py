# =============================================================
# config_utils.py
# Configuração: variáveis de ambiente (.env) + arquivo JSON de execução
# =============================================================

import os
import json
import math
from dataclasses import dataclass, asdict

from dotenv import load_dotenv

from utils.errors import ConfigError

load_dotenv()

# =========================================================
# 🔧 Padrões
# =========================================================
DEFAULT_TOL = 1e-10
DEFAULT_EPSILON = 1e-6
DEFAULT_SEED = 42
DEFAULT_RANDOM = 50

MODELOS = ("centralized", "cooperative", "nash", "bargaining", "benchmark")
PRESETS = ("fig2", "fig3", "fig45", "fig67", "fig8")
FORMATOS = ("json", "csv")


def threads() -> int:
    """Teto de paralelismo dos sweeps (INVEST_EQ_THREADS, padrão 1)."""
    bruto = os.getenv("INVEST_EQ_THREADS", "1")
    try:
        valor = int(bruto)
    except ValueError:
        raise ConfigError("INVEST_EQ_THREADS", f"inteiro esperado, recebido {bruto!r}")
    return max(1, valor)


# =========================================================
# 🧩 RunConfig
# =========================================================
@dataclass(frozen=True)
class RunConfig:
    model: str | None = None
    market: tuple[dict, ...] | None = None   # [{"r","a","b"}]
    tol: float = DEFAULT_TOL
    epsilon: float = DEFAULT_EPSILON
    out: str | None = None
    format: str | None = None
    preset: str | None = None
    sweep: dict | None = None
    seed: int = DEFAULT_SEED
    random: int = DEFAULT_RANDOM

    def to_dict(self) -> dict:
        dados = asdict(self)
        dados["market"] = [dict(cp) for cp in self.market] if self.market is not None else None
        return dados

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _num(campo: str, valor, positivo: bool = False) -> float:
    if isinstance(valor, bool) or not isinstance(valor, (int, float)):
        raise ConfigError(campo, f"número esperado, recebido {valor!r}")
    valor = float(valor)
    if not math.isfinite(valor):
        raise ConfigError(campo, "deve ser finito")
    if positivo and valor <= 0:
        raise ConfigError(campo, "deve ser > 0")
    return valor


def _int(campo: str, valor, minimo: int = 0) -> int:
    if isinstance(valor, bool) or not isinstance(valor, int):
        raise ConfigError(campo, f"inteiro esperado, recebido {valor!r}")
    if valor < minimo:
        raise ConfigError(campo, f"deve ser >= {minimo}")
    return valor


def parse_market(bruto, campo: str = "market") -> tuple[dict, ...]:
    """
    Normaliza a especificação de mercado para [{"r","a","b"}].
    Aceita {"psi","b"} como atalho de r=psi, a=1.
    """
    if not isinstance(bruto, list) or not bruto:
        raise ConfigError(campo, "lista não vazia de CPs esperada")
    cps = []
    for i, item in enumerate(bruto):
        path = f"{campo}[{i}]"
        if not isinstance(item, dict):
            raise ConfigError(path, "objeto esperado")
        b = _num(f"{path}.b", item.get("b", 1.0))
        if b < 1:
            raise ConfigError(f"{path}.b", "deve ser >= 1")
        if "psi" in item:
            if "r" in item or "a" in item:
                raise ConfigError(path, "use psi OU (r, a), não ambos")
            r, a = _num(f"{path}.psi", item["psi"], positivo=True), 1.0
        else:
            if "r" not in item or "a" not in item:
                raise ConfigError(path, "campos r e a (ou psi) obrigatórios")
            r = _num(f"{path}.r", item["r"], positivo=True)
            a = _num(f"{path}.a", item["a"], positivo=True)
        cps.append({"r": r, "a": a, "b": b})
    return tuple(cps)


def parse_run_config(dados: dict) -> RunConfig:
    """Valida um dicionário (arquivo JSON) e devolve RunConfig."""
    if not isinstance(dados, dict):
        raise ConfigError("<raiz>", "objeto JSON esperado")
    conhecidos = set(RunConfig.__dataclass_fields__)
    for chave in dados:
        if chave not in conhecidos:
            raise ConfigError(chave, "campo desconhecido")

    model = dados.get("model")
    if model is not None and model not in MODELOS:
        raise ConfigError("model", f"deve ser um de {', '.join(MODELOS)}")
    market = parse_market(dados["market"]) if dados.get("market") is not None else None
    preset = dados.get("preset")
    if preset is not None and preset not in PRESETS:
        raise ConfigError("preset", f"preset desconhecido: {preset!r}")
    sweep = dados.get("sweep")
    if sweep is not None and not isinstance(sweep, dict):
        raise ConfigError("sweep", "objeto esperado")
    fmt = dados.get("format")
    if fmt is not None and fmt not in FORMATOS:
        raise ConfigError("format", "deve ser json ou csv")
    out = dados.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError("out", "caminho (string) esperado")

    cfg = RunConfig(
        model=model,
        market=market,
        tol=_num("tol", dados.get("tol", DEFAULT_TOL), positivo=True),
        epsilon=_num("epsilon", dados.get("epsilon", DEFAULT_EPSILON), positivo=True),
        out=out,
        format=fmt,
        preset=preset,
        sweep=sweep,
        seed=_int("seed", dados.get("seed", DEFAULT_SEED)),
        random=_int("random", dados.get("random", DEFAULT_RANDOM)),
    )
    if cfg.market is not None and (cfg.preset is not None or cfg.sweep is not None):
        raise ConfigError("market", "market e preset/sweep são mutuamente exclusivos")
    if cfg.preset is not None and cfg.sweep is not None:
        raise ConfigError("preset", "preset e sweep são mutuamente exclusivos")
    return cfg


def load_run_config(path: str) -> RunConfig:
    """Lê o arquivo JSON de configuração."""
    try:
        with open(path, encoding="utf-8") as f:
            dados = json.load(f)
    except FileNotFoundError:
        raise ConfigError("config", f"arquivo não encontrado: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError("config", f"JSON inválido em {path}: {e}")
    return parse_run_config(dados)


def override(cfg: RunConfig, **valores) -> RunConfig:
    """Aplica flags de linha de comando (None = mantém o valor do arquivo)."""
    mudancas = {k: v for k, v in valores.items() if v is not None}
    if not mudancas:
        return cfg
    return parse_run_config({**cfg.to_dict(), **mudancas})
