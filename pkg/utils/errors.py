# =============================================================
# errors.py
# Exceções do motor de equilíbrio
# =============================================================


class DomainError(ValueError):
    """Entrada fora do domínio (negativa, não finita...)."""


class ContractError(ValueError):
    """Pré-condição violada pelo chamador (ex.: Q < q)."""


class ShapeError(ValueError):
    """Tamanhos incompatíveis entre mercado e alocação."""


class SizeError(ValueError):
    """Instância grande demais para enumeração exaustiva."""


class InconsistencyError(ArithmeticError):
    """Resultado numérico incoerente com a teoria (ex.: denominador <= 0)."""


class ConfigError(ValueError):
    """Erro de configuração; `campo` guarda o caminho do campo ofensivo."""

    def __init__(self, campo: str, mensagem: str):
        super().__init__(f"{campo}: {mensagem}")
        self.campo = campo
        self.mensagem = mensagem
