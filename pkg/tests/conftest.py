import os
import sys

import pytest

# raiz do repositório no path (modules/ e utils/ sem __init__)
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


@pytest.fixture(autouse=True)
def ambiente_isolado(tmp_path, monkeypatch):
    """Log de operações e saídas em diretório temporário."""
    monkeypatch.setenv("INVEST_EQ_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("INVEST_EQ_OUTPUT_DIR", str(tmp_path / "output"))
    monkeypatch.setenv("INVEST_EQ_THREADS", "1")
    yield tmp_path
