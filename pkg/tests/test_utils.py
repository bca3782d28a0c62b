import math
import os

import pytest

from modules.model import Flag, Status
from utils.errors import DomainError
from utils.file_utils import ensure_outfile, infer_format, sanitize_filename
from utils.log_utils import HEADER, log_path, log_result
from apoio_log import ler_log
from utils.validation_utils import check_nonneg, format_num, to_json_value


@pytest.mark.parametrize("valor, texto", [
    (None, ""),
    (0.0, "0"),
    (-0.0, "0"),
    (2.75, "2.75"),
    (1.0, "1"),
    (1 / 3, "0.333333333333"),
    (Flag.UNBOUNDED, "unbounded"),
    (Status.INFEASIBLE, "infeasible"),
    (True, "true"),
])
def test_format_num(valor, texto):
    assert format_num(valor) == texto


def test_format_num_nao_finito():
    with pytest.raises(DomainError):
        format_num(math.inf)


def test_to_json_value():
    assert to_json_value(Flag.UNDEFINED) == "undefined"
    assert to_json_value([1.0, Flag.UNBOUNDED]) == [1.0, "unbounded"]
    with pytest.raises(DomainError):
        to_json_value(math.nan)


def test_check_nonneg():
    assert check_nonneg("q", 2) == 2.0
    with pytest.raises(DomainError):
        check_nonneg("q", -1e-9)


def test_log_result_acumula(ambiente_isolado):
    log_result("solve", "nash", "psi=2", "ok", "Q=0.5")
    log_result("solve", "bargaining", "psi=2", "degenerate")
    assert log_path().startswith(str(ambiente_isolado))
    linhas = ler_log()
    assert [l["modelo"] for l in linhas] == ["nash", "bargaining"]
    assert list(linhas[0]) == HEADER
    assert ler_log(1)[0]["status"] == "degenerate"


def test_ler_logs_sem_arquivo():
    assert ler_log() == []


def test_arquivos_de_saida(ambiente_isolado):
    assert sanitize_filename(" fig 2/final ") == "fig_2_final"
    destino = ensure_outfile("fig2", "csv")
    assert destino == os.path.join(str(ambiente_isolado / "output"), "fig2.csv")
    assert os.path.isdir(os.path.dirname(destino))
    with pytest.raises(ValueError):
        ensure_outfile("fig2", "xlsx")
    assert infer_format("a/b.JSON") == "json"
    assert infer_format("a/b.txt") == "csv"
    assert infer_format(None, "json") == "json"
