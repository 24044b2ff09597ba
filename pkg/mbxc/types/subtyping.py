"""
Subtipagem coinductiva entre tipos de mailbox.

?E ≤ ?F quando E ⊑ F e !E ≤ !F quando F ⊑ E, com a própria relação em
construção como oráculo dos argumentos. Pares já assumidos são aceitos
(maior ponto fixo); como os tipos são regulares, só há finitos pares de
referências e a recursão termina.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass

from mbxc.patterns import WorkMeter, subpattern

from .base import (
    EMPTY_INPUT,
    TOP_OUTPUT,
    UNUSABLE,
    Capability,
    IntType,
    MailboxType,
    TypeExpr,
    TypeRef,
    TypeTable,
    nested_types,
)

logger = logging.getLogger(__name__)

Assumptions = frozenset[tuple[TypeExpr, TypeExpr]]


@dataclass(frozen=True)
class TypeClassification:
    relevant: bool
    reliable: bool
    usable: bool

    def to_dict(self) -> dict[str, bool]:
        return {
            "relevant": self.relevant,
            "reliable": self.reliable,
            "usable": self.usable,
        }


class Subtyping:
    """
    Motor de subtipagem para uma tabela de tipos.

    O método ``subtype`` é estável (pode ser usado como ``TypeRelation``
    em caches); resultados de consultas de topo são memorizados.
    """

    def __init__(self, table: TypeTable | None = None):
        self.table = table if table is not None else TypeTable()
        self._cache: dict[tuple[TypeExpr, TypeExpr], bool] = {}

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other

    def resolve(self, t: TypeExpr) -> IntType | MailboxType:
        return self.table.resolve(t)

    def subtype(self, t: TypeExpr, s: TypeExpr) -> bool:
        """t ≤ s."""
        key = (t, s)
        if key not in self._cache:
            self._cache[key] = self._sub(t, s, frozenset())
        return self._cache[key]

    def _sub(self, t: TypeExpr, s: TypeExpr, assumed: Assumptions) -> bool:
        if t == s:
            return True
        if (t, s) in assumed:
            return True
        if not assumed and (t, s) in self._cache:
            return self._cache[(t, s)]
        left, right = self.resolve(t), self.resolve(s)
        if isinstance(left, IntType) or isinstance(right, IntType):
            return isinstance(left, IntType) and isinstance(right, IntType)
        if left.capability is not right.capability:
            return False
        hypotheses = assumed | {(t, s)}

        def rel(a: TypeExpr, b: TypeExpr) -> bool:
            return self._sub(a, b, hypotheses)

        meter = WorkMeter()
        if left.capability is Capability.INPUT:
            return subpattern(left.pattern, right.pattern, rel, meter).holds
        return subpattern(right.pattern, left.pattern, rel, meter).holds

    def equiv(self, t: TypeExpr, s: TypeExpr) -> bool:
        """t ≂ s."""
        return self.subtype(t, s) and self.subtype(s, t)

    def classify(self, t: TypeExpr) -> TypeClassification:
        if isinstance(self.resolve(t), IntType):
            return TypeClassification(relevant=False, reliable=True, usable=True)
        return TypeClassification(
            relevant=not self.subtype(t, TOP_OUTPUT),
            reliable=not self.subtype(t, EMPTY_INPUT),
            usable=not self.subtype(UNUSABLE, t),
        )

    def is_irrelevant(self, t: TypeExpr) -> bool:
        return not self.classify(t).relevant


def subtype(t: TypeExpr, s: TypeExpr, table: TypeTable | None = None) -> bool:
    return Subtyping(table).subtype(t, s)


def type_equiv(t: TypeExpr, s: TypeExpr, table: TypeTable | None = None) -> bool:
    return Subtyping(table).equiv(t, s)


def classify(t: TypeExpr, table: TypeTable | None = None) -> TypeClassification:
    return Subtyping(table).classify(t)


@dataclass(frozen=True)
class TypeDiagnostic:
    """Violação das hipóteses globais sobre tipos."""

    where: str
    type: TypeExpr
    problem: str
    rationale: str
    pos: tuple[int, int] | None = None

    def __str__(self) -> str:
        return f"{self.where}: {self.type} {self.problem} ({self.rationale})"


_UNUSABLE_WHY = (
    "nenhuma construção consegue usar uma mailbox desse tipo, que só é "
    "habitada por processos que falham"
)
_UNRELIABLE_WHY = (
    "um argumento não confiável permitiria receber em uma mailbox de onde "
    "nenhuma mensagem pode ser consumida com segurança"
)


def check_global_assumptions(
    table: TypeTable,
    extra: Iterable[tuple[str, TypeExpr, tuple[int, int] | None]] = (),
) -> list[TypeDiagnostic]:
    """
    Todo tipo deve ser utilizável; todo tipo de argumento, utilizável e confiável.

    ``extra`` traz tipos de fora da tabela (parâmetros) com o local e a
    posição da declaração onde aparecem.
    """
    engine = Subtyping(table)
    diagnostics: list[TypeDiagnostic] = []
    problems = table.check_contractive()
    if problems:
        return [
            TypeDiagnostic(
                name, TypeRef(name), "não é contrativo", p, table.positions.get(name)
            )
            for p in problems
            for name in [p.split(":")[0]]
        ]

    visited: set[tuple[TypeExpr, bool]] = set()

    def visit(
        where: str, t: TypeExpr, as_argument: bool, pos: tuple[int, int] | None
    ) -> None:
        if (t, as_argument) in visited:
            return
        visited.add((t, as_argument))
        flags = engine.classify(t)
        if not flags.usable:
            diagnostics.append(TypeDiagnostic(where, t, "é inutilizável", _UNUSABLE_WHY, pos))
        if as_argument and not flags.reliable:
            diagnostics.append(
                TypeDiagnostic(where, t, "é um argumento não confiável", _UNRELIABLE_WHY, pos)
            )
        structural = engine.resolve(t)
        for arg in nested_types(structural):
            visit(where, arg, True, pos)

    for name in table:
        visit(f"type {name}", TypeRef(name), False, table.positions.get(name))
    for where, t, pos in extra:
        visit(where, t, False, pos)
    return diagnostics


__all__ = [
    "Subtyping",
    "TypeClassification",
    "TypeDiagnostic",
    "subtype",
    "type_equiv",
    "classify",
    "check_global_assumptions",
]
