import os
import csv
import logging
from datetime import datetime

import pytz

HEADER = ["data_hora", "comando", "modelo", "mercado", "status", "detalhe"]


def log_path() -> str:
    """Caminho do CSV de operações (relido do ambiente a cada chamada)."""
    return os.path.join(os.getenv("INVEST_EQ_LOG_DIR", "logs"), "operacoes.csv")


def tempo() -> str:
    """Timestamp atual no fuso configurado (dd/mm/aaaa HH:MM:SS)."""
    tz = pytz.timezone(os.getenv("INVEST_EQ_TZ", "America/Sao_Paulo"))
    return datetime.now(tz).strftime("%d/%m/%Y %H:%M:%S")


def log_result(comando, modelo, mercado, status, detalhe=""):
    """Registra o resultado de um comando no CSV de operações."""
    path = log_path()
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    nova_linha = {
        "data_hora": tempo(),
        "comando": comando,
        "modelo": modelo,
        "mercado": mercado,
        "status": status,
        "detalhe": detalhe,
    }

    novo = not os.path.exists(path)
    with open(path, "a", newline="", encoding="utf-8") as csvfile:
        writer = csv.DictWriter(csvfile, fieldnames=HEADER)
        if novo:
            writer.writeheader()
        writer.writerow(nova_linha)


def configurar_logging(nivel: str | None = None) -> None:
    """Configura o logger pai `equilibrio` (stderr, nível via INVEST_EQ_LOG_LEVEL)."""
    nivel = (nivel or os.getenv("INVEST_EQ_LOG_LEVEL", "WARNING")).upper()
    logger = logging.getLogger("equilibrio")
    logger.setLevel(getattr(logging, nivel, logging.WARNING))
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter("[%(asctime)s] %(name)s %(levelname)s %(message)s"))
        logger.addHandler(handler)
