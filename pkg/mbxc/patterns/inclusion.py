"""
Decisão de inclusão de padrões (E ⊑ F) sobre formas semilineares.

A relação de compatibilidade entre átomos de E e de F é aplicada
substituindo cada átomo de F pela soma dos átomos de E compatíveis com
ele; o problema vira inclusão de conjuntos semilineares sobre o alfabeto
de E. Cada termo linear de E é decidido por divisão recursiva do cone:
(a, P) = (a, P − {p}) ∪ (a + p, P), até que um termo de F cubra o cone
inteiro ou a base saia de F (contraexemplo).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from mbxc.errors import UndecidedError

from .base import Atom, Multiset, Pattern, TypeRelation
from .semilinear import (
    AtomAlphabet,
    CanonicalAtom,
    LinearTerm,
    SemilinearForm,
    Vector,
    WorkMeter,
    choices,
    form_contains,
    in_cone,
    normalize,
    reduce_form,
    term_contains,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InclusionResult:
    """Resultado de uma consulta E ⊑ F."""

    holds: bool
    """Se a inclusão vale."""

    witness: Multiset[Atom] | None = None
    """Configuração de E sem correspondente em F (quando não vale)."""

    bound: int = 0
    """Limite de profundidade usado na divisão dos cones."""

    def __bool__(self) -> bool:
        return self.holds


def preimage(
    form: SemilinearForm,
    options: dict[CanonicalAtom, list[CanonicalAtom]],
) -> SemilinearForm:
    """Troca cada átomo de ``form`` pelas escolhas compatíveis em ``options``."""
    terms: set[LinearTerm] = set()
    for term in form.terms:
        periods: set[Vector] = set()
        for period in term.periods:
            periods.update(c for c in choices(period, options) if c)
        for base in choices(term.base, options):
            terms.add(LinearTerm(base, frozenset(periods)))
    return SemilinearForm(frozenset(terms))


class _ConeSearch:
    def __init__(self, target: SemilinearForm, bound: int, meter: WorkMeter):
        self.target = sorted(target.terms, key=str)
        self.bound = bound
        self.meter = meter
        self.capped = False
        self._memo: dict[tuple[Vector, frozenset[Vector]], Vector | None] = {}
        self._cover: dict[tuple[int, Vector], bool] = {}

    def _covers(self, index: int, period: Vector) -> bool:
        key = (index, period)
        if key not in self._cover:
            self._cover[key] = in_cone(self.target[index].periods, period, self.meter)
        return self._cover[key]

    def counterexample(
        self, base: Vector, periods: frozenset[Vector], depth: int = 0
    ) -> Vector | None:
        key = (base, periods)
        if key in self._memo:
            return self._memo[key]
        self.meter.tick()
        result = self._search(base, periods, depth)
        self._memo[key] = result
        return result

    def _search(
        self, base: Vector, periods: frozenset[Vector], depth: int
    ) -> Vector | None:
        holders = [
            index
            for index, term in enumerate(self.target)
            if term_contains(term, base, self.meter)
        ]
        if not holders:
            return base
        if not periods:
            return None
        ordered = sorted(periods, key=str)
        best: list[Vector] | None = None
        for index in holders:
            missing = [p for p in ordered if not self._covers(index, p)]
            if not missing:
                return None
            if best is None or len(missing) < len(best):
                best = missing
        if depth >= self.bound:
            self.capped = True
            return None
        assert best is not None
        pivot = best[0]
        k = self._multiple(holders, pivot)
        if k is not None:
            # n·p = (n mod k)·p + (n div k)·(k·p)
            rest = (periods - {pivot}) | {pivot.scale(k)}
            for i in range(k):
                found = self.counterexample(base + pivot.scale(i), rest, depth + 1)
                if found is not None:
                    return found
            return None
        found = self.counterexample(base, periods - {pivot}, depth)
        if found is not None:
            return found
        return self.counterexample(base + pivot, periods, depth + 1)

    def _multiple(self, holders: list[int], pivot: Vector) -> int | None:
        """Menor k ≥ 2 com k·pivot no cone de algum termo que contém a base."""
        for k in range(2, self.bound + 1):
            multiple = pivot.scale(k)
            if any(self._covers(index, multiple) for index in holders):
                return k
        return None


def _bound(source: SemilinearForm, target: SemilinearForm) -> int:
    """Limite de coeficientes derivado da instância."""
    dimension = max(1, len(source.atoms() | target.atoms()))
    widest_base = max((len(t.base) for t in target.terms), default=0)
    widest_period = max(
        (len(p) for t in source.terms | target.terms for p in t.periods), default=0
    )
    return 1 + widest_base + widest_period * dimension


def subpattern(
    e: Pattern, f: Pattern, rel: TypeRelation, meter: WorkMeter | None = None
) -> InclusionResult:
    """Decide E ⊑[rel] F; devolve testemunha quando falso."""
    meter = meter or WorkMeter()
    alphabet = AtomAlphabet(rel)
    source = normalize(e, alphabet, meter)
    target = normalize(f, alphabet, meter)

    mine = sorted(source.atoms())
    options = {
        theirs: [atom for atom in mine if alphabet.compatible(atom, theirs)]
        for theirs in sorted(target.atoms())
    }
    image = reduce_form(preimage(target, options), meter)
    bound = _bound(source, image)
    search = _ConeSearch(image, bound, meter)

    for term in sorted(source.terms, key=str):
        witness = search.counterexample(term.base, term.periods)
        if witness is not None:
            config = alphabet.to_config(witness)
            logger.debug("🔍 %s ⋢ %s (testemunha %s)", e, f, config)
            return InclusionResult(False, config, bound)

    if search.capped:
        raise UndecidedError(
            meter.spent,
            meter.budget,
            f"{e} ⊑ {f} sem contraexemplo até o limite de coeficientes {bound}",
        )

    logger.debug("🔍 %s ⊑ %s (limite %d, trabalho %d)", e, f, bound, meter.spent)
    return InclusionResult(True, None, bound)


def pattern_equiv(
    e: Pattern, f: Pattern, rel: TypeRelation, meter: WorkMeter | None = None
) -> bool:
    """E ≂ F: inclusão nos dois sentidos."""
    return bool(subpattern(e, f, rel, meter)) and bool(subpattern(f, e, rel, meter))


def is_empty(e: Pattern, rel: TypeRelation) -> bool:
    """⟦E⟧ = ∅ (equivale a E ⊑ 𝟘)."""
    return not normalize(e, AtomAlphabet(rel)).terms


def accepts(e: Pattern, config: Multiset[Atom], rel: TypeRelation) -> bool:
    """Se a configuração (átomos sintáticos) casa com algum elemento de ⟦E⟧."""
    alphabet = AtomAlphabet(rel)
    form = normalize(e, alphabet)
    vector = Multiset.of(alphabet.canonical(a) for a in config)
    options = {
        theirs: [atom for atom in sorted(vector.support()) if alphabet.compatible(atom, theirs)]
        for theirs in sorted(form.atoms())
    }
    return form_contains(preimage(form, options), vector, WorkMeter())
