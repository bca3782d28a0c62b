import os
import re

INVALID_FN_CHARS = re.compile(r'[^A-Za-z0-9._-]')
FORMATOS = ("csv", "json")


def sanitize_filename(name: str) -> str:
    s = INVALID_FN_CHARS.sub('_', name.strip())
    return re.sub(r'_+', '_', s)


def output_dir() -> str:
    """Diretório padrão de saída dos sweeps (INVEST_EQ_OUTPUT_DIR)."""
    return os.getenv("INVEST_EQ_OUTPUT_DIR", "output")


def ensure_outfile(nome: str, formato: str, path_dir: str | None = None) -> str:
    """Monta `<dir>/<nome>.<formato>` criando o diretório."""
    if formato not in FORMATOS:
        raise ValueError(f"Formato de saída inválido: {formato}")
    path_dir = path_dir or output_dir()
    os.makedirs(path_dir, exist_ok=True)
    return os.path.join(path_dir, f"{sanitize_filename(nome)}.{formato}")


def ensure_parent(path: str) -> str:
    """Cria o diretório pai de `path` quando necessário."""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    return path


def infer_format(path: str | None, default: str = "csv") -> str:
    """Deduz o formato pela extensão (`.json` / `.csv`)."""
    if path:
        ext = os.path.splitext(path)[1].lower().lstrip(".")
        if ext in FORMATOS:
            return ext
    return default
