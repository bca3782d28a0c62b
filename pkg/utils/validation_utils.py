import math
from enum import Enum

from utils.errors import DomainError


def check_finite(nome: str, valor: float) -> float:
    """Garante escalar finito; devolve como float."""
    valor = float(valor)
    if not math.isfinite(valor):
        raise DomainError(f"{nome} deve ser finito (recebido {valor!r})")
    return valor


def check_nonneg(nome: str, valor: float) -> float:
    """Garante escalar finito e >= 0."""
    valor = check_finite(nome, valor)
    if valor < 0:
        raise DomainError(f"{nome} deve ser >= 0 (recebido {valor!r})")
    return valor



def format_num(valor) -> str:
    """
    Serializa um escalar para CSV: 12 dígitos significativos, forma mais curta.
    Flags (Enum) viram a string do valor; None vira campo vazio.
    """
    if valor is None:
        return ""
    if isinstance(valor, Enum):
        return str(valor.value)
    if isinstance(valor, bool):
        return "true" if valor else "false"
    valor = float(valor)
    if not math.isfinite(valor):
        raise DomainError(f"Valor não finito não pode ser serializado: {valor!r}")
    if valor == 0:
        return "0"
    return format(valor, ".12g")


def to_json_value(valor):
    """Converte escalares/flags para algo serializável em JSON."""
    if isinstance(valor, Enum):
        return valor.value
    if isinstance(valor, (list, tuple)):
        return [to_json_value(v) for v in valor]
    if isinstance(valor, float) and not math.isfinite(valor):
        raise DomainError(f"Valor não finito não pode ser serializado: {valor!r}")
    return valor
