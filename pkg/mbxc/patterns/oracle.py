"""
Oráculo de força bruta: configurações de tamanho limitado.

Transcrição direta da semântica indutiva dos padrões, usada pelos testes
para conferir as decisões da forma semilinear.
"""

from __future__ import annotations

from collections.abc import Iterable

from .base import (
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
)

Config = Multiset[Atom]


def configurations_up_to(pattern: Pattern, n: int) -> set[Config]:
    """{A ∈ ⟦E⟧ : |A| ≤ n}."""
    if n < 0:
        raise ValueError("n deve ser não negativo")
    match pattern:
        case Zero():
            return set()
        case One():
            return {Multiset()}
        case Atom():
            return {Multiset.of([pattern])} if n >= 1 else set()
        case Sum(left, right):
            return configurations_up_to(left, n) | configurations_up_to(right, n)
        case Product(left, right):
            lefts = configurations_up_to(left, n)
            rights = configurations_up_to(right, n)
            return {a + b for a in lefts for b in rights if len(a) + len(b) <= n}
        case Star(body):
            unit = configurations_up_to(body, n)
            reached: set[Config] = {Multiset()}
            frontier = set(reached)
            while frontier:
                grown = {
                    a + b for a in frontier for b in unit if 0 < len(b) and len(a) + len(b) <= n
                }
                frontier = grown - reached
                reached |= frontier
            return reached
        case Hole(name):
            raise ValueError(f"padrão com variável livre {name} não tem semântica")
    raise TypeError(f"padrão inválido: {pattern!r}")


def config_matches(mine: Config, theirs: Config, rel: TypeRelation) -> bool:
    """Existe bijeção entre as mensagens com tags iguais e argumentos ``rel``?"""
    if len(mine) != len(theirs):
        return False
    left = list(mine)
    right = list(theirs)
    used = [False] * len(right)

    def fits(a: Atom, b: Atom) -> bool:
        return (
            a.tag == b.tag
            and len(a.args) == len(b.args)
            and all(rel(x, y) for x, y in zip(a.args, b.args, strict=True))
        )

    def assign(index: int) -> bool:
        if index == len(left):
            return True
        for j, candidate in enumerate(right):
            if not used[j] and fits(left[index], candidate):
                used[j] = True
                if assign(index + 1):
                    return True
                used[j] = False
        return False

    return assign(0)


def matched_in(config: Config, configs: Iterable[Config], rel: TypeRelation) -> bool:
    return any(config_matches(config, other, rel) for other in configs)


def brute_force_subpattern(
    e: Pattern, f: Pattern, n: int, rel: TypeRelation
) -> Config | None:
    """Primeira configuração de E (até n) sem correspondente em F, se houver."""
    theirs = configurations_up_to(f, n)
    for config in sorted(configurations_up_to(e, n), key=lambda c: (len(c), str(c))):
        if not matched_in(config, theirs, rel):
            return config
    return None
