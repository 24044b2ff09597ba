"""
Forma semilinear de um padrão.

A semântica de um padrão é um conjunto semilinear de vetores de Parikh:
união finita de termos lineares (base + combinações não negativas de
períodos). O alfabeto é finito porque átomos são identificados por tag e
pelas classes de equivalência (≂) dos tipos dos argumentos.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from mbxc.config import WORK_BUDGET
from mbxc.errors import UndecidedError

from .base import (
    Atom,
    Hole,
    Multiset,
    One,
    Pattern,
    Product,
    Star,
    Sum,
    Zero,
    pprod,
    psum,
)

if TYPE_CHECKING:
    from mbxc.types.base import TypeExpr

    from .base import TypeRelation


@dataclass(frozen=True, order=True)
class CanonicalAtom:
    """Átomo canônico: tag + ids das classes de tipo dos argumentos."""

    tag: str
    arg_classes: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.arg_classes:
            return self.tag
        return f"{self.tag}<{','.join(map(str, self.arg_classes))}>"


Vector = Multiset[CanonicalAtom]

EMPTY_VECTOR: Vector = Multiset()


@dataclass(frozen=True)
class LinearTerm:
    """{base + Σ kᵢ·periodᵢ : kᵢ ≥ 0}."""

    base: Vector
    periods: frozenset[Vector] = frozenset()

    def __str__(self) -> str:
        periods = ", ".join(sorted(str(p) for p in self.periods))
        return f"({self.base}; {{{periods}}})"


@dataclass(frozen=True)
class SemilinearForm:
    terms: frozenset[LinearTerm] = frozenset()

    def __str__(self) -> str:
        return " ∪ ".join(sorted(str(t) for t in self.terms)) or "∅"

    def atoms(self) -> frozenset[CanonicalAtom]:
        found: set[CanonicalAtom] = set()
        for term in self.terms:
            found |= term.base.support()
            for period in term.periods:
                found |= period.support()
        return frozenset(found)

    def is_finite(self) -> bool:
        return all(not term.periods for term in self.terms)


class AtomAlphabet:
    """
    Alfabeto canônico de uma consulta.

    Classes de tipos são formadas sob ≂ usando o oráculo ``rel``; cada
    átomo canônico guarda o primeiro átomo sintático visto como
    representante (usado em testemunhas e na reconstrução de padrões).
    """

    def __init__(self, rel: TypeRelation):
        self.rel = rel
        self._classes: list[TypeExpr] = []
        self._representatives: dict[CanonicalAtom, Atom] = {}
        self._compatible: dict[tuple[CanonicalAtom, CanonicalAtom], bool] = {}

    def type_class(self, t: TypeExpr) -> int:
        for index, rep in enumerate(self._classes):
            if rep == t or (self.rel(t, rep) and self.rel(rep, t)):
                return index
        self._classes.append(t)
        return len(self._classes) - 1

    def canonical(self, atom: Atom) -> CanonicalAtom:
        canon = CanonicalAtom(atom.tag, tuple(self.type_class(a) for a in atom.args))
        self._representatives.setdefault(canon, atom)
        return canon

    def representative(self, canon: CanonicalAtom) -> Atom:
        return self._representatives[canon]

    def compatible(self, mine: CanonicalAtom, theirs: CanonicalAtom) -> bool:
        """Se a mensagem ``mine`` pode ocupar o lugar de ``theirs`` (args ≤)."""
        key = (mine, theirs)
        if key not in self._compatible:
            self._compatible[key] = (
                mine.tag == theirs.tag
                and len(mine.arg_classes) == len(theirs.arg_classes)
                and all(
                    a == b or self.rel(self._classes[a], self._classes[b])
                    for a, b in zip(mine.arg_classes, theirs.arg_classes, strict=True)
                )
            )
        return self._compatible[key]

    def to_config(self, vector: Vector) -> Multiset[Atom]:
        return Multiset.of(self.representative(c) for c in vector)

    def to_pattern(self, form: SemilinearForm) -> Pattern:
        """Reconstrói um padrão com a mesma semântica da forma."""
        summands = []
        for term in sorted(form.terms, key=str):
            factors: list[Pattern] = [self.representative(c) for c in term.base]
            for period in sorted(term.periods, key=str):
                factors.append(Star(pprod(self.representative(c) for c in period)))
            summands.append(pprod(factors))
        return psum(summands)


@dataclass
class WorkMeter:
    """Contador de trabalho com orçamento; estoura com ``UndecidedError``."""

    budget: int = field(default_factory=lambda: WORK_BUDGET)
    spent: int = 0

    def tick(self, amount: int = 1) -> None:
        self.spent += amount
        if self.spent > self.budget:
            raise UndecidedError(self.spent, self.budget)


def normalize(
    pattern: Pattern, alphabet: AtomAlphabet, meter: WorkMeter | None = None
) -> SemilinearForm:
    """
    Forma semilinear exata de um padrão.

    Após cada soma, produto e estrela a forma é reduzida (``reduce_form``),
    o que mantém estrelas aninhadas com poucos termos.
    """
    meter = meter or WorkMeter()
    match pattern:
        case Zero():
            return SemilinearForm()
        case One():
            return SemilinearForm(frozenset({LinearTerm(EMPTY_VECTOR)}))
        case Atom():
            vector = Multiset.of([alphabet.canonical(pattern)])
            return SemilinearForm(frozenset({LinearTerm(vector)}))
        case Sum(left, right):
            a, b = normalize(left, alphabet, meter), normalize(right, alphabet, meter)
            return reduce_form(SemilinearForm(a.terms | b.terms), meter)
        case Product(left, right):
            a, b = normalize(left, alphabet, meter), normalize(right, alphabet, meter)
            return reduce_form(_product(a, b), meter)
        case Star(body):
            result = SemilinearForm(frozenset({LinearTerm(EMPTY_VECTOR)}))
            for term in sorted(normalize(body, alphabet, meter).terms, key=str):
                result = reduce_form(_product(result, _star_term(term)), meter)
            return result
        case Hole(name):
            raise ValueError(f"padrão com variável livre {name} não tem semântica")
    raise TypeError(f"padrão inválido: {pattern!r}")


def _product(a: SemilinearForm, b: SemilinearForm) -> SemilinearForm:
    return SemilinearForm(
        frozenset(
            LinearTerm(s.base + t.base, s.periods | t.periods)
            for s in a.terms
            for t in b.terms
        )
    )


def _star_term(term: LinearTerm) -> SemilinearForm:
    periods = frozenset(p for p in term.periods if p)
    if not term.base:
        return SemilinearForm(frozenset({LinearTerm(EMPTY_VECTOR, periods)}))
    return SemilinearForm(
        frozenset(
            {
                LinearTerm(EMPTY_VECTOR),
                LinearTerm(term.base, periods | {term.base}),
            }
        )
    )


# ---------------------------------------------------------------------------
# Pertinência
# ---------------------------------------------------------------------------


def in_cone(
    periods: Iterable[Vector],
    vector: Vector,
    meter: WorkMeter,
    memo: dict | None = None,
) -> bool:
    """Se ``vector`` é combinação inteira não negativa dos períodos."""
    ordered = tuple(sorted(periods, key=str))
    memo = {} if memo is None else memo
    return _in_cone(ordered, vector, meter, memo)


def _in_cone(
    periods: tuple[Vector, ...], vector: Vector, meter: WorkMeter, memo: dict
) -> bool:
    if not vector:
        return True
    key = (periods, vector)
    if key in memo:
        return memo[key]
    meter.tick()
    memo[key] = False
    pivot = vector.items[0][0]
    result = any(
        p.count(pivot) > 0 and p <= vector and _in_cone(periods, vector - p, meter, memo)
        for p in periods
    )
    memo[key] = result
    return result


def term_contains(term: LinearTerm, vector: Vector, meter: WorkMeter) -> bool:
    if not term.base <= vector:
        return False
    return in_cone(term.periods, vector - term.base, meter)


def form_contains(form: SemilinearForm, vector: Vector, meter: WorkMeter) -> bool:
    return any(term_contains(term, vector, meter) for term in form.terms)


def _reduce_periods(term: LinearTerm, meter: WorkMeter) -> LinearTerm:
    kept = sorted((p for p in term.periods if p), key=lambda p: (len(p), str(p)), reverse=True)
    for period in list(kept):
        others = [p for p in kept if p != period]
        if in_cone(others, period, meter):
            kept.remove(period)
    return LinearTerm(term.base, frozenset(kept))


def term_includes(outer: LinearTerm, inner: LinearTerm, meter: WorkMeter) -> bool:
    """Condição suficiente para ⟦inner⟧ ⊆ ⟦outer⟧: base e períodos no cone de ``outer``."""
    return term_contains(outer, inner.base, meter) and all(
        in_cone(outer.periods, p, meter) for p in inner.periods
    )


def reduce_form(form: SemilinearForm, meter: WorkMeter) -> SemilinearForm:
    """
    Remove períodos gerados pelos demais e termos contidos em outro termo.

    A semântica não muda: cada remoção é justificada por um elemento que
    continua na forma (a inclusão entre termos é transitiva).
    """
    survivors = sorted(
        {_reduce_periods(term, meter) for term in form.terms},
        key=lambda t: (len(t.periods), -len(t.base), str(t)),
    )
    for term in list(survivors):
        if any(other is not term and term_includes(other, term, meter) for other in survivors):
            survivors.remove(term)
    return SemilinearForm(frozenset(survivors))


def choices(
    vector: Vector, options: dict[CanonicalAtom, Sequence[CanonicalAtom]]
) -> list[Vector]:
    """Todas as imagens de ``vector`` trocando cada átomo por uma opção."""
    per_atom: list[list[Vector]] = []
    for atom, count in vector.items:
        candidates = options.get(atom, ())
        if not candidates:
            return []
        per_atom.append(
            [
                Multiset.of(combo)
                for combo in itertools.combinations_with_replacement(candidates, count)
            ]
        )
    result = {sum(combo, EMPTY_VECTOR) for combo in itertools.product(*per_atom)}
    return sorted(result, key=str)
