"""
Resíduos, formas normais e fatoração de padrões.

``residual`` é o operador sintático (parcial) que remove uma mensagem de
um padrão; ``is_normal_form`` verifica se uma soma tem o formato exigido
pelos guards; ``largest_cofactor`` e ``pattern_quotient`` fazem a
subtração de configurações usada na combinação de tipos.
"""

from __future__ import annotations

import itertools
import logging
from functools import lru_cache

from .base import (
    ONE,
    ZERO,
    Atom,
    Hole,
    Multiset,
    One,
    Pattern,
    Product,
    Star,
    Sum,
    TypeRelation,
    Zero,
    simplify,
)
from .inclusion import is_empty, pattern_equiv, subpattern
from .oracle import configurations_up_to
from .semilinear import (
    AtomAlphabet,
    LinearTerm,
    SemilinearForm,
    Vector,
    WorkMeter,
    choices,
    normalize,
)

logger = logging.getLogger(__name__)


class _Undefined(Exception):
    pass


def residual(e: Pattern, m: Atom, rel: TypeRelation) -> Pattern | None:
    """E / 𝕄, ou None quando indefinido."""
    try:
        return simplify(_residual_cached(e, m, rel))
    except _Undefined:
        return None


@lru_cache(maxsize=4096)
def _residual_cached(e: Pattern, m: Atom, rel: TypeRelation) -> Pattern:
    return _residual(e, m, rel)


def _residual(e: Pattern, m: Atom, rel: TypeRelation) -> Pattern:
    match e:
        case Zero() | One():
            return ZERO
        case Atom(tag, args):
            if tag != m.tag:
                return ZERO
            if len(args) == len(m.args) and all(
                rel(t, s) for t, s in zip(args, m.args, strict=True)
            ):
                return ONE
            raise _Undefined
        case Sum(left, right):
            return Sum(_residual(left, m, rel), _residual(right, m, rel))
        case Product(left, right):
            return Sum(
                Product(_residual(left, m, rel), right),
                Product(left, _residual(right, m, rel)),
            )
        case Star(body):
            return Product(_residual(body, m, rel), e)
        case Hole(name):
            raise ValueError(f"resíduo de variável livre {name}")
    raise TypeError(f"padrão inválido: {e!r}")


def summands(e: Pattern) -> list[Pattern]:
    if isinstance(e, Sum):
        return summands(e.left) + summands(e.right)
    return [e]


def factors(e: Pattern) -> list[Pattern]:
    if isinstance(e, Product):
        return factors(e.left) + factors(e.right)
    return [e]


def split_summand(summand: Pattern) -> list[tuple[Atom, Pattern]]:
    """Leituras possíveis de um somando como 𝕄·F."""
    if isinstance(summand, Atom):
        return [(summand, ONE)]
    parts = factors(summand)
    readings = []
    for index, part in enumerate(parts):
        if isinstance(part, Atom):
            rest = parts[:index] + parts[index + 1 :]
            cofactor = rest[0]
            for other in rest[1:]:
                cofactor = Product(cofactor, other)
            readings.append((part, cofactor))
    return readings


def normal_form_violation(e: Pattern, rel: TypeRelation) -> str | None:
    """Motivo pelo qual ⊨E não é derivável, ou None se está em forma normal."""
    for summand in summands(e):
        if isinstance(summand, Zero | One):
            continue
        readings = split_summand(summand)
        if not readings:
            return f"o somando {summand} não tem a forma M.F"
        problems = []
        for atom, cofactor in readings:
            expected = residual(e, atom, rel)
            if expected is None:
                problems.append(f"{e} / {atom} é indefinido")
            elif pattern_equiv(cofactor, expected, rel):
                break
            else:
                problems.append(f"{cofactor} ≄ {simplify(expected)} = ({e}) / {atom}")
        else:
            return problems[0]
    return None


def is_normal_form(e: Pattern, rel: TypeRelation) -> bool:
    return normal_form_violation(e, rel) is None


# ---------------------------------------------------------------------------
# Subtração de configurações
# ---------------------------------------------------------------------------


def _minimal(vectors: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    def dominated(k: tuple[int, ...], other: tuple[int, ...]) -> bool:
        return other != k and all(a <= b for a, b in zip(other, k, strict=True))

    return [k for k in vectors if not any(dominated(k, o) for o in vectors)]


def _subtract(term: LinearTerm, removed: Vector) -> set[LinearTerm]:
    """{x : x + removed ∈ term} como união de termos lineares."""
    periods = sorted(term.periods, key=str)
    size = len(removed)
    feasible = []
    for ks in itertools.product(range(size + 1), repeat=len(periods)):
        if sum(ks) > size:
            continue
        total = term.base
        for k, period in zip(ks, periods, strict=True):
            total = total + period.scale(k)
        if removed <= total:
            feasible.append(ks)
    result = set()
    for ks in _minimal(feasible):
        total = term.base
        for k, period in zip(ks, periods, strict=True):
            total = total + period.scale(k)
        result.add(LinearTerm(total - removed, term.periods))
    return result


def _single_cofactor(
    i_form: SemilinearForm, removed: Multiset[Atom], alphabet: AtomAlphabet
) -> SemilinearForm:
    vector = Multiset.of(alphabet.canonical(a) for a in removed)
    targets = sorted(i_form.atoms())
    options = {
        atom: [t for t in targets if alphabet.compatible(atom, t)]
        for atom in vector.support()
    }
    terms: set[LinearTerm] = set()
    for image in choices(vector, options):
        for term in i_form.terms:
            terms |= _subtract(term, image)
    return SemilinearForm(frozenset(terms))


def largest_cofactor(
    i: Pattern, o: Pattern, rel: TypeRelation, meter: WorkMeter | None = None
) -> Pattern | None:
    """
    Maior D (a menos de ≂) com O·D ⊑ I.

    Exato quando O descreve uma única configuração. Caso contrário, os
    candidatos I − v (v configurações pequenas de O) são verificados e o
    maior verificado é devolvido; None quando nenhum se verifica.
    """
    alphabet = AtomAlphabet(rel)
    i_form = normalize(i, alphabet)
    o_form = normalize(o, alphabet)
    if not o_form.terms:
        return None
    if len(o_form.terms) == 1 and o_form.is_finite():
        (term,) = o_form.terms
        removed = alphabet.to_config(term.base)
        return alphabet.to_pattern(_single_cofactor(i_form, removed, alphabet))

    meter = meter or WorkMeter()
    size = max(len(t.base) for t in o_form.terms) + 1
    verified: list[Pattern] = []
    for config in sorted(configurations_up_to(o, size), key=lambda c: (len(c), str(c))):
        candidate = alphabet.to_pattern(_single_cofactor(i_form, config, alphabet))
        if subpattern(Product(o, candidate), i, rel, meter):
            verified.append(candidate)
    if not verified:
        logger.debug("⚠️ nenhum cofator verificado para %s em %s", o, i)
        return None
    best = verified[0]
    for candidate in verified[1:]:
        if subpattern(best, candidate, rel, meter):
            best = candidate
    return best


def pattern_quotient(
    g: Pattern, e: Pattern, rel: TypeRelation, meter: WorkMeter | None = None
) -> Pattern | None:
    """F com G ≂ E·F, quando encontrado e verificado."""
    alphabet = AtomAlphabet(rel)
    g_form = normalize(g, alphabet)
    e_form = normalize(e, alphabet)
    if e_form.is_finite():
        terms: set[LinearTerm] = set()
        for term in e_form.terms:
            removed = alphabet.to_config(term.base)
            terms |= _single_cofactor(g_form, removed, alphabet).terms
        candidate = alphabet.to_pattern(SemilinearForm(frozenset(terms)))
    else:
        candidate = largest_cofactor(g, e, rel, meter)
        if candidate is None:
            return None
    if pattern_equiv(Product(e, candidate), g, rel, meter):
        return candidate
    logger.debug("⚠️ quociente %s ÷ %s não verificado (candidato %s)", g, e, candidate)
    return None


def balance_residual(
    g: Pattern, e: Pattern, rel: TypeRelation, meter: WorkMeter | None = None
) -> Pattern | None:
    """
    Entrada que resta de ``?G`` depois das saídas ``!E``.

    Usa o quociente exato (G ≂ E·F) quando existe; senão o maior cofator
    F com E·F ⊑ G, aceito apenas quando não é vazio. Assim ``!m ∥ ?m*``
    resolve para ``?m*``.
    """
    exact = pattern_quotient(g, e, rel, meter)
    if exact is not None:
        return exact
    cofactor = largest_cofactor(g, e, rel, meter)
    if cofactor is None or is_empty(cofactor, rel):
        return None
    logger.debug("🔧 %s ÷ %s sem quociente exato; cofator %s", g, e, cofactor)
    return cofactor
