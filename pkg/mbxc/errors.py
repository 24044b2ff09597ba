"""
Hierarquia de exceções do mbxc.

Erros de tipagem nunca viram exceção: o checker devolve diagnósticos.
As exceções abaixo sinalizam entrada malformada ou limites estourados.
"""

from dataclasses import dataclass


class MbxcError(Exception):
    """Raiz de todas as exceções do pacote."""


@dataclass(frozen=True)
class SyntaxIssue:
    """Problema de sintaxe ou de escopo com posição no fonte."""

    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class ParseError(MbxcError):
    """Falha de parsing; carrega todos os problemas encontrados."""

    def __init__(self, issues: list[SyntaxIssue]):
        self.issues = sorted(issues, key=lambda i: (i.line, i.column))
        super().__init__("\n".join(str(issue) for issue in self.issues))


class UndecidedError(MbxcError):
    """A busca de inclusão excedeu o orçamento de trabalho ou o limite de coeficientes."""

    def __init__(self, work: int, budget: int, reason: str | None = None):
        self.work = work
        self.budget = budget
        reason = reason or (
            f"{work} unidades de trabalho excedem o orçamento de {budget} "
            "(ajuste MBXC_WORK_BUDGET)"
        )
        super().__init__(f"inclusão indecidida: {reason}")


class UnboundProcessError(MbxcError):
    """Invocação de processo sem definição correspondente."""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"processo não definido: {name}")


class MailboxError(MbxcError):
    """Estado de execução malformado (ex.: inteiro usado como mailbox)."""


class SessionError(MbxcError):
    """Tipo de sessão irregular ou malformado."""
