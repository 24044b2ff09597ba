"""
Usos adiados de nomes.

Em vez de combinar tipos no momento da composição paralela, cada nome
carrega ``Usage(O, I)``: as saídas acumuladas ``O`` e, no máximo, uma
obrigação de entrada ``I``. O tipo só é resolvido onde um alvo é
conhecido: ``!O`` sem entrada, ``?D`` com ``I ≂ O·D``.
"""

from __future__ import annotations

from dataclasses import dataclass

from mbxc.patterns import ONE, Pattern, WorkMeter, balance_residual, pprod
from mbxc.types import INT, IntType, MailboxType, Subtyping, TypeExpr, inp, out


@dataclass(frozen=True)
class Usage:
    outputs: Pattern = ONE
    input: Pattern | None = None
    base: IntType | None = None

    @classmethod
    def of_type(cls, t: IntType | MailboxType) -> Usage:
        if isinstance(t, IntType):
            return INT_USAGE
        if t.is_input:
            return cls(ONE, t.pattern)
        return cls(t.pattern, None)

    @property
    def is_int(self) -> bool:
        return self.base is not None

    def par(self, other: Usage) -> Usage | None:
        """Combinação adiada (τ ∥ σ); None quando indefinida."""
        if self.is_int or other.is_int:
            return self if self.is_int and other.is_int else None
        if self.input is not None and other.input is not None:
            return None
        outputs = pprod([o for o in (self.outputs, other.outputs) if o != ONE])
        return Usage(outputs, self.input if self.input is not None else other.input)

    def residual_input(self, engine: Subtyping, meter: WorkMeter | None = None) -> Pattern | None:
        """D com I ≂ O·D, ou o maior D não vazio com O·D ⊑ I (None sem entrada)."""
        if self.input is None or self.is_int:
            return None
        if self.outputs == ONE:
            return self.input
        return balance_residual(self.input, self.outputs, engine.subtype, meter)

    def resolve(self, engine: Subtyping, meter: WorkMeter | None = None) -> TypeExpr | None:
        if self.is_int:
            return INT
        if self.input is None:
            return out(self.outputs)
        rest = self.residual_input(engine, meter)
        return None if rest is None else inp(rest)

    def __str__(self) -> str:
        if self.is_int:
            return "int"
        if self.input is None:
            return str(out(self.outputs))
        if self.outputs == ONE:
            return str(inp(self.input))
        return f"{out(self.outputs)} ∥ {inp(self.input)}"


INT_USAGE = Usage(ONE, None, INT)

UsageEnv = dict[str, Usage]


def par_envs(left: UsageEnv, right: UsageEnv) -> tuple[UsageEnv, list[str]]:
    """Γ ∥ Δ adiado; devolve também os nomes cuja combinação é indefinida."""
    result = dict(left)
    clashes = []
    for name, usage in right.items():
        if name in result:
            combined = result[name].par(usage)
            if combined is None:
                clashes.append(name)
                continue
            result[name] = combined
        else:
            result[name] = usage
    return result, clashes
