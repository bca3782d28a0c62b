import csv
import dataclasses

import pytest

from modules import centralized
from modules.model import Flag, Market
from modules.processador_integridade import (
    checar_barganha, checar_centralizado, checar_nash, checar_p_star, mercados_aleatorios,
    processar_integridade,
)
from modules.validator_core import checar, checar_igual, checar_limite, resumir, validar_generico
from apoio_log import ler_log


def test_linhas_de_checagem():
    assert checar("x", 1.0, 1.0 + 1e-9, 1e-8)[-1] == "OK"
    assert checar("x", 1.0, 1.1, 1e-8)[-1] == "FALHA"
    assert checar_igual("flag", Flag.UNBOUNDED, Flag.UNBOUNDED)[1:3] == ["unbounded", "unbounded"]
    assert checar_limite("beta", 1.0, 0.99, sentido=">=")[-1] == "FALHA"
    assert checar_limite("gain", 1e-7, 0.0, sentido="<=")[-1] == "OK"


def test_validar_generico_com_relatorio(tmp_path):
    grupos = {"a": [checar("x", 1.0, 1.0, 0.0)], "b": [checar("y", 1.0, 2.0, 0.1)]}
    destino = tmp_path / "rel" / "verify.csv"
    res = validar_generico(grupos, str(destino))
    assert not res["ok"]
    assert (res["total"], res["aprovadas"], res["falhas"]) == (2, 1, 1)
    with open(destino, newline="", encoding="utf-8") as fp:
        linhas = list(csv.reader(fp, delimiter=";"))
    assert linhas[0][0] == "Check"
    assert [l[-1] for l in linhas[1:]] == ["OK", "FALHA"]
    assert resumir([]) == {"total": 0, "aprovadas": 0, "falhas": 0}


def test_mercados_aleatorios_deterministicos():
    a = mercados_aleatorios(7, 5)
    b = mercados_aleatorios(7, 5)
    assert a == b
    assert all(1 <= m.N <= 2 for m, _ in a)
    assert all(0.2 <= psi <= 6.0 for m, _ in a for psi in m.psi)
    assert mercados_aleatorios(8, 5) != a


@pytest.mark.parametrize("psi, b", [
    ([3.0, 1.0], [1.0, 1.5]),
    ([0.4], [1.0]),
    ([2.0, 2.0], [1.0, 1.0]),
])
def test_checagens_por_mercado(psi, b):
    m = Market.from_psi(psi, b)
    linhas = checar_p_star(m, 1.3) + checar_centralizado(m) + checar_nash(m) + checar_barganha(m)
    assert [l[0] for l in linhas if l[-1] != "OK"] == []


def test_suite_de_exemplos_passa(tmp_path):
    relatorio = tmp_path / "verify.csv"
    res = processar_integridade(seed=3, n_random=0, report_path=str(relatorio))
    assert res["ok"], [l for l in res["resultados"] if l[-1] != "OK"]
    assert res["status"] == "OK"
    assert relatorio.exists()
    ultimo = ler_log(1)[0]
    assert (ultimo["comando"], ultimo["status"]) == ("verify", "OK")


def test_controle_negativo_detecta_solver_errado(monkeypatch):
    original = centralized.solve_centralized

    def desviado(market, tol=centralized.DEFAULT_TOL):
        sol = original(market, tol)
        return dataclasses.replace(sol, Q_star=sol.Q_star + 0.1)

    monkeypatch.setattr(centralized, "solve_centralized", desviado)
    res = processar_integridade(seed=3, n_random=0)
    assert not res["ok"]
    assert res["status"] == "FALHA"
    assert any(l[0].startswith("Q_C") and l[-1] == "FALHA" for l in res["resultados"])
