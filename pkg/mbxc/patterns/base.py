"""
Padrões: expressões regulares comutativas sobre átomos de mensagem.

Os argumentos dos átomos são expressões de tipo (ver ``mbxc.types``); os
padrões não recorrem nos argumentos, que são comparados apenas pela
relação de tipos fornecida a cada operação.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass
from typing import TYPE_CHECKING, Generic, TypeVar

if TYPE_CHECKING:
    from mbxc.types.base import TypeExpr

T = TypeVar("T")

TypeRelation = Callable[["TypeExpr", "TypeExpr"], bool]
"""Oráculo de pré-ordem sobre expressões de tipo (``rel(t, s)`` ~ t ≤ s)."""


# Precedências de impressão
_SUM, _PRODUCT, _STAR = 1, 2, 3


class Pattern:
    """Base dos nós de padrão."""

    def __add__(self, other: Pattern) -> Pattern:
        return Sum(self, other)

    def __mul__(self, other: Pattern) -> Pattern:
        return Product(self, other)

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Zero(Pattern):
    """𝟘: nenhuma configuração."""


@dataclass(frozen=True)
class One(Pattern):
    """𝟙: apenas a mailbox vazia."""


@dataclass(frozen=True)
class Atom(Pattern):
    """Átomo ℓ(T̄): uma mensagem com tag e tipos de argumentos."""

    tag: str
    args: tuple[TypeExpr, ...] = ()


@dataclass(frozen=True)
class Sum(Pattern):
    left: Pattern
    right: Pattern


@dataclass(frozen=True)
class Product(Pattern):
    left: Pattern
    right: Pattern


@dataclass(frozen=True)
class Star(Pattern):
    body: Pattern


@dataclass(frozen=True)
class Hole(Pattern):
    """Variável de padrão (``_`` ou ``_nome``) usada só na geração de restrições."""

    name: str


ZERO = Zero()
ONE = One()


def render(pattern: Pattern, context: int = 0) -> str:
    match pattern:
        case Zero():
            return "0"
        case One():
            return "1"
        case Hole(name):
            return name
        case Atom(tag, args):
            if not args:
                return tag
            return f"{tag}({', '.join(str(a) for a in args)})"
        case Sum(left, right):
            text = f"{render(left, _SUM)} + {render(right, _SUM)}"
            return f"({text})" if context > _SUM else text
        case Product(left, right):
            text = f"{render(left, _PRODUCT)} . {render(right, _PRODUCT)}"
            return f"({text})" if context > _PRODUCT else text
        case Star(body):
            return f"{render(body, _STAR)}*"
    raise TypeError(f"padrão inválido: {pattern!r}")


def is_atomic(pattern: Pattern) -> bool:
    """Se o padrão imprime sem parênteses depois de ``?``/``!``."""
    return isinstance(pattern, Zero | One | Atom | Star | Hole)


def psum(patterns: Iterable[Pattern]) -> Pattern:
    """Soma n-ária; vazia é 𝟘."""
    items = list(patterns)
    if not items:
        return ZERO
    result = items[0]
    for item in items[1:]:
        result = Sum(result, item)
    return result


def pprod(patterns: Iterable[Pattern]) -> Pattern:
    """Produto n-ário; vazio é 𝟙."""
    items = list(patterns)
    if not items:
        return ONE
    result = items[0]
    for item in items[1:]:
        result = Product(result, item)
    return result


def simplify(pattern: Pattern) -> Pattern:
    """Simplificação sintática barata (unidades e absorção); preserva ⟦·⟧."""
    match pattern:
        case Sum(left, right):
            a, b = simplify(left), simplify(right)
            if isinstance(a, Zero):
                return b
            if isinstance(b, Zero) or a == b:
                return a
            return Sum(a, b)
        case Product(left, right):
            a, b = simplify(left), simplify(right)
            if isinstance(a, Zero) or isinstance(b, Zero):
                return ZERO
            if isinstance(a, One):
                return b
            if isinstance(b, One):
                return a
            return Product(a, b)
        case Star(body):
            inner = simplify(body)
            if isinstance(inner, Zero | One):
                return ONE
            if isinstance(inner, Star):
                return inner
            return Star(inner)
    return pattern


def atoms_of(pattern: Pattern) -> Iterator[Atom]:
    """Átomos do padrão em ordem de ocorrência (sem entrar nos argumentos)."""
    match pattern:
        case Atom():
            yield pattern
        case Sum(left, right) | Product(left, right):
            yield from atoms_of(left)
            yield from atoms_of(right)
        case Star(body):
            yield from atoms_of(body)


def holes_of(pattern: Pattern) -> Iterator[Hole]:
    match pattern:
        case Hole():
            yield pattern
        case Sum(left, right) | Product(left, right):
            yield from holes_of(left)
            yield from holes_of(right)
        case Star(body):
            yield from holes_of(body)


def map_atoms(pattern: Pattern, fn: Callable[[Atom], Pattern]) -> Pattern:
    """Substitui cada átomo pelo padrão ``fn(atom)``."""
    match pattern:
        case Atom():
            return fn(pattern)
        case Sum(left, right):
            return Sum(map_atoms(left, fn), map_atoms(right, fn))
        case Product(left, right):
            return Product(map_atoms(left, fn), map_atoms(right, fn))
        case Star(body):
            return Star(map_atoms(body, fn))
    return pattern


# ---------------------------------------------------------------------------
# Multiconjuntos
# ---------------------------------------------------------------------------


def _sort_key(item: object) -> str:
    return str(item)


@dataclass(frozen=True)
class Multiset(Generic[T]):
    """Multiconjunto imutável: pares (item, contagem) ordenados pela impressão."""

    items: tuple[tuple[T, int], ...] = ()

    @classmethod
    def of(cls, elements: Iterable[T]) -> Multiset[T]:
        return cls.from_counts(Counter(elements))

    @classmethod
    def from_counts(cls, counts: dict[T, int]) -> Multiset[T]:
        pairs = [(item, n) for item, n in counts.items() if n > 0]
        pairs.sort(key=lambda pair: _sort_key(pair[0]))
        return cls(tuple(pairs))

    def counts(self) -> dict[T, int]:
        return dict(self.items)

    def count(self, item: T) -> int:
        return self.counts().get(item, 0)

    def __len__(self) -> int:
        return sum(n for _, n in self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    def __iter__(self) -> Iterator[T]:
        for item, n in self.items:
            for _ in range(n):
                yield item

    def support(self) -> frozenset[T]:
        return frozenset(item for item, _ in self.items)

    def __add__(self, other: Multiset[T]) -> Multiset[T]:
        counts = Counter(self.counts())
        counts.update(other.counts())
        return Multiset.from_counts(counts)

    def scale(self, k: int) -> Multiset[T]:
        return Multiset.from_counts({item: n * k for item, n in self.items})

    def __le__(self, other: Multiset[T]) -> bool:
        theirs = other.counts()
        return all(theirs.get(item, 0) >= n for item, n in self.items)

    def __sub__(self, other: Multiset[T]) -> Multiset[T]:
        """Diferença; exige ``other <= self``."""
        counts = Counter(self.counts())
        counts.subtract(other.counts())
        if any(n < 0 for n in counts.values()):
            raise ValueError(f"{other} não está contido em {self}")
        return Multiset.from_counts(counts)

    def __str__(self) -> str:
        return "[" + ", ".join(str(item) for item in self) + "]"


Config = Multiset["Atom"]
"""Configuração: multiconjunto de átomos, elemento de ⟦E⟧."""


def config_to_pattern(config: Multiset[Atom]) -> Pattern:
    return pprod(config)
