# =============================================================
# validator_core.py
# Núcleo de Verificação – solvers x oráculos
# v2.0 | Linhas de checagem, resumo e relatório CSV consolidado
# =============================================================

from pathlib import Path
import csv
import math
import logging
from enum import Enum

from utils.validation_utils import format_num

logger = logging.getLogger("equilibrio.validator")

HEADER = ["Check", "Esperado", "Obtido", "Diferença", "Tolerância", "Status"]


# -------------------------------------------------------------
# FUNÇÕES AUXILIARES
# -------------------------------------------------------------
def _texto(valor) -> str:
    if isinstance(valor, (Enum, bool)) or valor is None:
        return format_num(valor)
    if isinstance(valor, (int, float)):
        return format_num(valor) if math.isfinite(valor) else str(valor)
    return str(valor)


def checar(nome: str, esperado: float, obtido: float, tol: float) -> list:
    """Compara escalares: |obtido − esperado| <= tol."""
    diff = abs(obtido - esperado)
    status = "OK" if diff <= tol else "FALHA"
    return [nome, _texto(esperado), _texto(obtido), _texto(diff), _texto(tol), status]


def checar_igual(nome: str, esperado, obtido) -> list:
    """Compara valores discretos (flags, status, conjuntos, booleanos)."""
    status = "OK" if esperado == obtido else "FALHA"
    return [nome, _texto(esperado), _texto(obtido), "", "", status]


def checar_limite(nome: str, limite: float, obtido: float, tol: float = 0.0,
                  sentido: str = ">=") -> list:
    """obtido >= limite − tol (ou <= limite + tol)."""
    if sentido == ">=":
        ok = obtido >= limite - tol
    else:
        ok = obtido <= limite + tol
    return [nome, f"{sentido} {_texto(limite)}", _texto(obtido), "", _texto(tol),
            "OK" if ok else "FALHA"]


# -------------------------------------------------------------
def resumir(resultados: list[list]) -> dict:
    """Conta OK / FALHA."""
    total_ok = sum(1 for r in resultados if r[-1] == "OK")
    return {"total": len(resultados), "aprovadas": total_ok, "falhas": len(resultados) - total_ok}


def gerar_csv(resultados: list[list], arquivo_csv: Path | str) -> Path:
    """Gera o relatório CSV consolidado."""
    arquivo_csv = Path(arquivo_csv)
    arquivo_csv.parent.mkdir(parents=True, exist_ok=True)
    with open(arquivo_csv, "w", newline="", encoding="utf-8") as fp:
        writer = csv.writer(fp, delimiter=";")
        writer.writerow(HEADER)
        writer.writerows(resultados)
    return arquivo_csv


# -------------------------------------------------------------
def validar_generico(grupos: dict[str, list[list]], relatorio: str | None = None) -> dict:
    """
    Consolida os grupos de checagens, grava o relatório (opcional)
    e devolve um dicionário com status e mensagem.
    """
    resultados = [linha for linhas in grupos.values() for linha in linhas]
    resumo = resumir(resultados)

    for grupo, linhas in grupos.items():
        falhas = [l for l in linhas if l[-1] != "OK"]
        if falhas:
            logger.warning(f"❌ {grupo}: {len(falhas)} falha(s) de {len(linhas)}")
            for l in falhas:
                logger.warning(f"   {l[0]}: esperado {l[1]}, obtido {l[2]}")
        else:
            logger.info(f"✅ {grupo}: {len(linhas)} checagem(ns) OK")

    caminho = str(gerar_csv(resultados, relatorio)) if relatorio else None
    if caminho:
        logger.info(f"Relatório salvo em: {caminho}")

    return {
        "ok": resumo["falhas"] == 0,
        "mensagem": (
            f"Verificação concluída: {resumo['total']} checagens "
            f"({resumo['aprovadas']} OK, {resumo['falhas']} falhas)"
        ),
        "resultados": resultados,
        "relatorio": caminho,
        **resumo,
    }
