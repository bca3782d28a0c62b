import csv
import json

import pytest

from modules.experiments import (
    CSV_HEADER, DELTA_GRID, PRESETS, PSI_GRID, DeltaSweepConfig, PsiGridConfig, run_delta_sweep,
    run_preset, run_psi_grid, run_sweep, sweep_from_dict, write_csv, write_json,
)
from modules.centralized import nonzero_condition
from modules.model import Flag, Market, Status
from modules.nash import solve_nash
from utils.errors import ConfigError


def _delta_cfg(**kw):
    base = dict(N=2, c=2.0, delta_grid=(0.0, 0.5), b_vectors=((1.0, 1.0),),
                models=("centralized", "benchmark"))
    return DeltaSweepConfig(**{**base, **kw})


# -------------------------------------------------------------
# Configurações
# -------------------------------------------------------------
def test_grades_padrao():
    assert DELTA_GRID[0] == 0.0 and DELTA_GRID[-1] == 1.5 and len(DELTA_GRID) == 31
    assert PSI_GRID[0] == 0.25 and PSI_GRID[-1] == 5.0 and len(PSI_GRID) == 20


def test_presets_declarados():
    assert set(PRESETS) == {"fig2", "fig3", "fig45", "fig67", "fig8"}
    fig2, = PRESETS["fig2"]
    assert fig2.c == 2.0 and len(fig2.b_vectors) == 4
    fig3, = PRESETS["fig3"]
    assert fig3.c == 7.0 and "cooperative" in fig3.models
    assert [cfg.b_vector for cfg in PRESETS["fig45"]] == [(1.0, 1.0), (2.0, 2.0)]
    assert all(cfg.model == "bargaining" for cfg in PRESETS["fig67"] + PRESETS["fig8"])


@pytest.mark.parametrize("kw, campo", [
    ({"N": 0}, "N"),
    ({"c": -1.0}, "c"),
    ({"delta_grid": []}, "delta_grid"),
    ({"delta_grid": (0.0, -0.5)}, "delta_grid[1]"),
    ({"b_vectors": ((1.0,),)}, "b_vectors[0]"),
    ({"b_vectors": ((1.0, 0.5),)}, "b_vectors[0][1]"),
    ({"models": ("magic",)}, "models[0]"),
])
def test_delta_config_invalida(kw, campo):
    with pytest.raises(ConfigError) as exc:
        _delta_cfg(**kw)
    assert exc.value.campo == campo


def test_psi_config_invalida():
    with pytest.raises(ConfigError) as exc:
        PsiGridConfig(psi1_grid=(0.0,))
    assert exc.value.campo == "psi1_grid[0]"
    with pytest.raises(ConfigError):
        PsiGridConfig(b_vector=(1.0, 1.0, 1.0))
    with pytest.raises(ConfigError):
        PsiGridConfig(metrics=("beta",), model="centralized")


def test_sweep_from_dict():
    cfg = sweep_from_dict({"kind": "psi", "psi1_grid": [1.0], "psi2_grid": [2.0]})
    assert isinstance(cfg, PsiGridConfig)
    with pytest.raises(ConfigError) as exc:
        sweep_from_dict({"kind": "delta", "delta_grid": ["x"]})
    assert exc.value.campo == "sweep.delta_grid[0]"
    with pytest.raises(ConfigError) as exc:
        sweep_from_dict({"kind": "delta", "extra": 1})
    assert exc.value.campo == "sweep.extra"
    with pytest.raises(ConfigError) as exc:
        sweep_from_dict({"kind": "outro"})
    assert exc.value.campo == "sweep.kind"


def test_preset_desconhecido():
    with pytest.raises(ConfigError):
        run_preset("fig99")


# -------------------------------------------------------------
# Execução
# -------------------------------------------------------------
def test_delta_sweep_linhas_e_ordem():
    rows = run_delta_sweep(_delta_cfg())
    assert [(r.delta, r.model) for r in rows] == [
        (0.0, "centralized"), (0.0, "benchmark"), (0.5, "centralized"), (0.5, "benchmark"),
    ]
    central = rows[0]
    assert central.psi == (2.0, 2.0)
    assert central.Q == pytest.approx(2.75, abs=1e-9)
    assert central.gamma == pytest.approx(22.0, rel=1e-7)
    bench = rows[1]
    assert bench.Q == 3.0 and bench.P == 0.0 and bench.gamma is Flag.UNDEFINED
    # ψ_2 = c·2^(−δ)
    assert rows[2].psi[1] == pytest.approx(2.0 * 2 ** -0.5)


def test_delta_sweep_cooperativo_inviavel():
    rows = run_delta_sweep(_delta_cfg(c=7.0, delta_grid=(0.0,), models=("cooperative",)))
    assert rows[0].status is Status.INFEASIBLE
    assert rows[0].total_utility is None
    assert rows[0].csv_row()[-1] == "infeasible"


def test_psi_grid_nash():
    cfg = PsiGridConfig(psi1_grid=(0.25, 2.0), psi2_grid=(0.25, 2.0),
                        metrics=("eta", "gamma_N", "Gamma"), model="nash")
    rows = run_psi_grid(cfg)
    assert [r.psi for r in rows] == [(0.25, 0.25), (0.25, 2.0), (2.0, 0.25), (2.0, 2.0)]
    assert rows[0].eta is Flag.UNDEFINED
    assert rows[3].eta == pytest.approx(5.5, rel=1e-8)
    assert rows[3].gamma_N == pytest.approx(1.0)
    assert rows[3].beta is None


def test_psi_grid_barganha_subgrade_de_preset():
    base = PRESETS["fig67"][0]
    cfg = PsiGridConfig(psi1_grid=(2.0,), psi2_grid=(2.0, 0.25), b_vector=base.b_vector,
                        metrics=base.metrics, model=base.model)
    rows = run_sweep(cfg)
    assert rows[0].beta == pytest.approx(1.0, abs=1e-7)
    assert rows[0].gamma_B == pytest.approx(rows[0].Q / rows[0].P)
    assert rows[0].alpha is None
    assert all(r.status is Status.OK for r in rows)


def test_paralelismo_nao_muda_resultado(monkeypatch):
    cfg = _delta_cfg(delta_grid=(0.0, 0.25, 0.5, 1.0), models=("centralized", "nash"))
    seq = [r.csv_row() for r in run_delta_sweep(cfg)]
    monkeypatch.setenv("INVEST_EQ_THREADS", "4")
    par = [r.csv_row() for r in run_delta_sweep(cfg)]
    assert seq == par


def test_threads_invalido(monkeypatch):
    monkeypatch.setenv("INVEST_EQ_THREADS", "muitos")
    with pytest.raises(ConfigError):
        run_delta_sweep(_delta_cfg())


# -------------------------------------------------------------
# Saída
# -------------------------------------------------------------
def test_write_csv(tmp_path):
    rows = run_delta_sweep(_delta_cfg(delta_grid=(0.0,)))
    destino = write_csv(rows, str(tmp_path / "sub" / "fig.csv"))
    with open(destino, newline="", encoding="utf-8") as fp:
        linhas = list(csv.reader(fp))
    assert linhas[0] == CSV_HEADER
    central, bench = linhas[1], linhas[2]
    assert central[:6] == ["centralized", "1", "1", "0", "2", "2"]
    assert central[6] == "2.75"
    assert central[-1] == "ok"
    assert bench[8] == "undefined"
    assert bench[10] == ""          # eta


def test_write_json(tmp_path):
    rows = run_psi_grid(PsiGridConfig(psi1_grid=(1.2,), psi2_grid=(1.2,), metrics=("eta",)))
    destino = write_json(rows, str(tmp_path / "grade.json"))
    with open(destino, encoding="utf-8") as fp:
        dados = json.load(fp)
    assert dados[0]["eta"] == "unbounded"
    assert dados[0]["psi"] == [1.2, 1.2]
    assert dados[0]["status"] == "ok"


# -------------------------------------------------------------
# Presets completos
# -------------------------------------------------------------
def _csv_bytes(rows, destino):
    write_csv(rows, str(destino))
    return destino.read_bytes()


def test_fig2_relacoes_com_benchmark():
    rows = run_preset("fig2")
    centrais, benchs = rows[0::2], rows[1::2]
    assert {r.model for r in centrais} == {"centralized"}
    assert {r.model for r in benchs} == {"benchmark"}
    for c, bm in zip(centrais, benchs):
        assert (c.b, c.delta) == (bm.b, bm.delta)
        assert bm.Q >= c.Q - 1e-9
        assert c.total_utility >= bm.total_utility - 1e-12


def test_fig2_tendencias_em_delta():
    rows = [r for r in run_preset("fig2") if r.model == "centralized"]
    por_b = {}
    for r in rows:
        por_b.setdefault(r.b, []).append(r)

    for serie in por_b.values():
        Qs = [r.Q for r in serie]
        assert all(a >= b - 1e-9 for a, b in zip(Qs, Qs[1:]))

    # b = [1, 1] tem o maior γ_C em todo δ
    base = por_b[(1.0, 1.0)]
    for outros in por_b.values():
        for r0, r in zip(base, outros):
            assert r0.delta == r.delta
            assert r0.gamma >= r.gamma * (1 - 1e-9)


@pytest.mark.parametrize("nome", ["fig2", "fig45"])
def test_preset_csv_identico_entre_execucoes(nome, tmp_path):
    primeiro = _csv_bytes(run_preset(nome), tmp_path / "a.csv")
    segundo = _csv_bytes(run_preset(nome), tmp_path / "b.csv")
    assert primeiro == segundo


def test_fig8_regioes_de_alpha(tmp_path):
    rows = run_preset("fig8")
    assert _csv_bytes(rows, tmp_path / "a.csv") == _csv_bytes(run_preset("fig8"), tmp_path / "b.csv")

    ilimitados = zeros = 0
    for r in rows:
        m = Market.from_psi(list(r.psi), list(r.b))
        ilimitado = r.alpha is Flag.UNBOUNDED
        zero = not isinstance(r.alpha, Flag) and r.alpha == 0
        assert ilimitado == (solve_nash(m).Q_star == 0 and r.Q > 0), r.psi
        assert zero == (not nonzero_condition(m)), r.psi
        ilimitados += ilimitado
        zeros += zero
    assert ilimitados > 0 and zeros > 0

    with open(tmp_path / "a.csv", newline="", encoding="utf-8") as fp:
        alphas = [linha["alpha"] for linha in csv.DictReader(fp)]
    assert alphas.count("unbounded") == ilimitados
    assert alphas.count("0") == zeros
