import os, sys
import json
import argparse

from dotenv import load_dotenv

# --- Ajuste de path (execução direta: python app.py ...) ---
BASE_DIR = os.path.dirname(os.path.abspath(__file__))
sys.path.append(BASE_DIR)

# --- Imports locais ---
from equilibrium_core import market_from_config, solve_market
from modules.experiments import PRESETS, run_preset, run_sweep, sweep_from_dict, write_csv, write_json
from modules.processador_integridade import processar_integridade
from utils.config_utils import RunConfig, load_run_config, override
from utils.errors import ConfigError, SizeError
from utils.file_utils import ensure_outfile, ensure_parent, infer_format
from utils.log_utils import configurar_logging, log_result

EXIT_OK = 0
EXIT_FALHA = 1
EXIT_CONFIG = 2
EXIT_SEM_SOLUCAO = 3


# ==============================
# Argumentos
# ==============================
def _floats(campo: str, texto: str | None) -> list[float] | None:
    if texto is None:
        return None
    try:
        return [float(x) for x in texto.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(campo, f"lista de números separados por vírgula esperada: {texto!r}")


def build_parser() -> argparse.ArgumentParser:
    comum = argparse.ArgumentParser(add_help=False)
    comum.add_argument("--config", help="arquivo JSON de configuração")
    comum.add_argument("--model", help="centralized | cooperative | nash | bargaining | benchmark")
    comum.add_argument("--psi", help="ψ por CP (atalho para r=ψ, a=1), ex.: 2,1.5")
    comum.add_argument("--r", help="receita por tráfego por CP")
    comum.add_argument("--a", help="escala de ganho de tráfego por CP")
    comum.add_argument("--b", help="eficiência privada por CP (padrão 1)")
    comum.add_argument("--tol", type=float, help="tolerância dos solvers (padrão 1e-10)")
    comum.add_argument("--epsilon", type=float, help="piso de q_n no modelo cooperativo")
    comum.add_argument("--out", help="arquivo de saída")
    comum.add_argument("--format", help="csv | json")
    comum.add_argument("--preset", help=f"{' | '.join(PRESETS)}")
    comum.add_argument("--seed", type=int, help="semente da verificação")
    comum.add_argument("--random", type=int, help="quantidade de mercados aleatórios")
    comum.add_argument("--dump-config", action="store_true",
                       help="imprime a configuração efetiva e sai")

    parser = argparse.ArgumentParser(
        prog="invest-eq",
        description="Equilíbrios de investimento público/privado de CPs",
    )
    sub = parser.add_subparsers(dest="comando", required=True)
    sub.add_parser("solve", parents=[comum], help="resolve um mercado")
    sub.add_parser("sweep", parents=[comum], help="executa preset ou varredura customizada")
    sub.add_parser("verify", parents=[comum], help="solvers x oráculos")
    return parser


def _mercado_flags(args) -> list[dict] | None:
    psi = _floats("psi", args.psi)
    r = _floats("r", args.r)
    a = _floats("a", args.a)
    b = _floats("b", args.b)

    if psi is not None:
        if r is not None or a is not None:
            raise ConfigError("psi", "use --psi OU (--r, --a), não ambos")
        b = b if b is not None else [1.0] * len(psi)
        if len(b) != len(psi):
            raise ConfigError("b", f"{len(b)} valores para {len(psi)} CPs")
        return [{"psi": x, "b": y} for x, y in zip(psi, b)]

    if r is not None or a is not None:
        if r is None or a is None or len(r) != len(a):
            raise ConfigError("r", "--r e --a precisam ter o mesmo número de CPs")
        b = b if b is not None else [1.0] * len(r)
        if len(b) != len(r):
            raise ConfigError("b", f"{len(b)} valores para {len(r)} CPs")
        return [{"r": x, "a": y, "b": z} for x, y, z in zip(r, a, b)]

    if b is not None:
        raise ConfigError("b", "--b exige --psi ou --r/--a")
    return None


def montar_config(args) -> RunConfig:
    """Arquivo JSON (opcional) + flags; flags prevalecem."""
    cfg = load_run_config(args.config) if args.config else RunConfig()
    return override(
        cfg,
        model=args.model,
        market=_mercado_flags(args),
        tol=args.tol,
        epsilon=args.epsilon,
        out=args.out,
        format=args.format,
        preset=args.preset,
        seed=args.seed,
        random=args.random,
    )


# ==============================
# Comandos
# ==============================
def cmd_solve(cfg: RunConfig) -> int:
    if cfg.market is None:
        raise ConfigError("market", "obrigatório para solve (--psi / --r --a / config)")
    if cfg.model is None:
        raise ConfigError("model", "obrigatório para solve")

    doc = solve_market(market_from_config(cfg.market), cfg.model, cfg.tol, cfg.epsilon)
    texto = json.dumps(doc, indent=2)
    print(texto)
    if cfg.out:
        with open(ensure_parent(cfg.out), "w", encoding="utf-8") as fp:
            fp.write(texto + "\n")

    if doc["status"] in ("infeasible", "degenerate"):
        return EXIT_SEM_SOLUCAO
    return EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.preset is None and cfg.sweep is None:
        raise ConfigError("preset", "informe --preset ou um arquivo com 'sweep'")

    if cfg.preset is not None:
        nome = cfg.preset
        rows = run_preset(nome, cfg.tol, cfg.epsilon)
    else:
        nome = "sweep"
        rows = run_sweep(sweep_from_dict(cfg.sweep), cfg.tol, cfg.epsilon)

    formato = cfg.format or infer_format(cfg.out)
    destino = cfg.out or ensure_outfile(nome, formato)
    (write_json if formato == "json" else write_csv)(rows, destino)

    print(f"{len(rows)} linhas gravadas em {destino}")
    log_result("sweep", nome, "-", "OK", f"{len(rows)} linhas -> {destino}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    resultado = processar_integridade(cfg.seed, cfg.random, cfg.out)
    for linha in resultado["resultados"]:
        print(f"[{linha[-1]}] {linha[0]}")
    print(resultado["mensagem"])
    return EXIT_OK if resultado["ok"] else EXIT_FALHA


COMANDOS = {"solve": cmd_solve, "sweep": cmd_sweep, "verify": cmd_verify}


# ==============================
# Main
# ==============================
def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    configurar_logging()
    args = build_parser().parse_args(argv)

    try:
        cfg = montar_config(args)
        if args.dump_config:
            print(cfg.dumps())
            return EXIT_OK
        return COMANDOS[args.comando](cfg)
    except ConfigError as e:
        print(f"❌ Erro de configuração em {e}", file=sys.stderr)
        try:
            log_result(args.comando, args.model or "-", "-", "ERRO", str(e))
        except OSError:
            pass
        return EXIT_CONFIG
    except SizeError as e:
        # solve_market já registrou a falha no log de operações
        print(f"❌ Mercado grande demais: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
