"""
Tipos de mailbox.

Um tipo é ``int``, uma capacidade (``?``/``!``) com um padrão, ou uma
referência nomeada à tabela de tipos (árvores regulares).
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from enum import Enum

from mbxc.patterns.base import ONE, ZERO, Atom, Pattern, atoms_of, is_atomic


class Capability(Enum):
    INPUT = "?"
    OUTPUT = "!"


@dataclass(frozen=True)
class IntType:
    def __str__(self) -> str:
        return "int"


@dataclass(frozen=True)
class MailboxType:
    capability: Capability
    pattern: Pattern

    @property
    def is_input(self) -> bool:
        return self.capability is Capability.INPUT

    @property
    def is_output(self) -> bool:
        return self.capability is Capability.OUTPUT

    def __str__(self) -> str:
        body = str(self.pattern)
        if not is_atomic(self.pattern):
            body = f"({body})"
        return f"{self.capability.value}{body}"


@dataclass(frozen=True)
class TypeRef:
    name: str

    def __str__(self) -> str:
        return self.name


TypeExpr = IntType | MailboxType | TypeRef

INT = IntType()


def inp(pattern: Pattern) -> MailboxType:
    return MailboxType(Capability.INPUT, pattern)


def out(pattern: Pattern) -> MailboxType:
    return MailboxType(Capability.OUTPUT, pattern)


TOP_OUTPUT = out(ONE)
"""!𝟙: o tipo das mailboxes irrelevantes."""

EMPTY_INPUT = inp(ZERO)
UNUSABLE = out(ZERO)


class NonContractiveError(ValueError):
    """Ciclo de referências que não passa por argumento de átomo."""


@dataclass
class TypeTable(Mapping[str, TypeExpr]):
    """Tabela de tipos nomeados (``type N = ...``)."""

    definitions: dict[str, TypeExpr] = field(default_factory=dict)
    positions: dict[str, tuple[int, int] | None] = field(default_factory=dict, compare=False)
    """Linha e coluna de cada declaração ``type``, quando vieram de um fonte."""

    def __getitem__(self, name: str) -> TypeExpr:
        return self.definitions[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.definitions)

    def __len__(self) -> int:
        return len(self.definitions)

    def __hash__(self) -> int:
        return id(self)

    def resolve(self, t: TypeExpr) -> IntType | MailboxType:
        """Desdobra referências até um tipo estrutural."""
        seen: list[str] = []
        while isinstance(t, TypeRef):
            if t.name in seen:
                cycle = " -> ".join([*seen, t.name])
                raise NonContractiveError(f"tipo não contrativo: {cycle}")
            if t.name not in self.definitions:
                raise KeyError(f"tipo não definido: {t.name}")
            seen.append(t.name)
            t = self.definitions[t.name]
        return t

    def check_contractive(self) -> list[str]:
        """Nomes cujos desdobramentos não chegam a um tipo estrutural."""
        problems = []
        for name in self.definitions:
            try:
                self.resolve(TypeRef(name))
            except (NonContractiveError, KeyError) as exc:
                problems.append(f"{name}: {exc}")
        return problems


def nested_types(t: TypeExpr) -> Iterator[TypeExpr]:
    """Tipos de argumento que aparecem nos átomos de ``t`` (um nível)."""
    if isinstance(t, MailboxType):
        for atom in atoms_of(t.pattern):
            yield from atom.args


def atoms_in(t: MailboxType) -> list[Atom]:
    return list(atoms_of(t.pattern))
