"""
Combinação de tipos e de ambientes, e subtipagem de ambientes.
"""

from __future__ import annotations

from collections.abc import Mapping

from mbxc.patterns import Product, balance_residual

from .base import IntType, MailboxType, TypeExpr, inp, out
from .subtyping import Subtyping

TypeEnv = Mapping[str, TypeExpr]


def combine_types(t: TypeExpr, s: TypeExpr, engine: Subtyping) -> TypeExpr | None:
    """τ ∥ σ, ou None quando indefinido."""
    left, right = engine.resolve(t), engine.resolve(s)
    if isinstance(left, IntType) or isinstance(right, IntType):
        return left if isinstance(left, IntType) and isinstance(right, IntType) else None
    if left.is_output and right.is_output:
        return out(Product(left.pattern, right.pattern))
    if left.is_input and right.is_input:
        return None
    sender, receiver = (left, right) if left.is_output else (right, left)
    return _balance(sender, receiver, engine)


def _balance(sender: MailboxType, receiver: MailboxType, engine: Subtyping) -> TypeExpr | None:
    rest = balance_residual(receiver.pattern, sender.pattern, engine.subtype)
    return None if rest is None else inp(rest)


def combine_envs(g1: TypeEnv, g2: TypeEnv, engine: Subtyping) -> dict[str, TypeExpr] | None:
    """Γ ∥ Δ: combinação ponto a ponto nos nomes comuns, união no resto."""
    result = dict(g1)
    for name, t in g2.items():
        if name in result:
            combined = combine_types(result[name], t, engine)
            if combined is None:
                return None
            result[name] = combined
        else:
            result[name] = t
    return result


def env_subtype(g: TypeEnv, d: TypeEnv, engine: Subtyping) -> bool:
    """Γ ≤ Δ: Δ vem de Γ por subtipagem ponto a ponto e descarte de irrelevantes."""
    for name, t in d.items():
        if name not in g or not engine.subtype(g[name], t):
            return False
    return all(engine.is_irrelevant(t) for name, t in g.items() if name not in d)


def env_subtype_violations(g: TypeEnv, d: TypeEnv, engine: Subtyping) -> list[str]:
    """Versão explicativa de ``env_subtype``."""
    problems = []
    for name, t in d.items():
        if name not in g:
            continue
        if not engine.subtype(g[name], t):
            problems.append(f"{name}: {g[name]} não é subtipo de {t}")
    for name, t in g.items():
        if name not in d and not engine.is_irrelevant(t):
            problems.append(f"{name}: {t} é relevante e não pode ser descartado")
    return problems


def is_reliable_env(g: TypeEnv, engine: Subtyping) -> bool:
    return all(engine.classify(t).reliable for t in g.values())
