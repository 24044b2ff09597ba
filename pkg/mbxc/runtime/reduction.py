"""
Semântica operacional: um passo de redução sobre formas normais.

Regras: ``r-read`` (consome uma mensagem com a tag de um ramo de
recepção), ``r-free`` (descarta uma mailbox restrita que não aparece em
nenhum outro componente), ``r-def`` (desdobra uma invocação), ``r-if``
(condicional inteiro) e ``r-print`` (o console ``system`` consome
``print_int(n)``).
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

from mbxc.syntax.ast import (
    PRINT_TAG,
    SYSTEM,
    Fail,
    Free,
    GuardedProcess,
    If,
    IntLit,
    Invoke,
    New,
    Process,
    Program,
    Receive,
    Send,
    par_all,
)
from mbxc.syntax.congruence import (
    evaluate_cond,
    free_names,
    nf_parts,
    normal_form,
    shape,
    substitute,
)
from mbxc.syntax.printer import print_cond

logger = logging.getLogger(__name__)

R_READ = "r-read"
R_FREE = "r-free"
R_DEF = "r-def"
R_IF = "r-if"
R_PRINT = "r-print"


@dataclass(frozen=True)
class Transition:
    """Um passo ``P → Q`` com a regra aplicada e o redex."""

    rule: str
    redex: str
    target: Process
    key: str
    origins: Mapping[str, str] = field(default_factory=dict, compare=False, hash=False)
    printed: int | None = None


def _wrap(binders: list[str], components: list[Process]) -> Process:
    result = par_all(components)
    for name in reversed(binders):
        result = New(name, result)
    return result


class _Stepper:
    def __init__(self, program: Program, state: Process, origins: Mapping[str, str]):
        self.program = program
        self.origins = origins
        self.binders, self.components = nf_parts(state)

    def emit(
        self,
        rule: str,
        redex: str,
        consumed: tuple[int, ...],
        produced: list[Process],
        binders: list[str] | None = None,
        printed: int | None = None,
    ) -> Transition:
        rest = [c for i, c in enumerate(self.components) if i not in consumed]
        raw = _wrap(self.binders if binders is None else binders, rest + produced)
        target, origins = normal_form(raw, self.origins)
        return Transition(rule, redex, target, shape(target), origins, printed)

    def reads(self) -> list[Transition]:
        found = []
        for i, message in enumerate(self.components):
            if not isinstance(message, Send) or message.target == SYSTEM:
                continue
            for j, guard in enumerate(self.components):
                if not isinstance(guard, GuardedProcess):
                    continue
                for branch in guard.branches:
                    if (
                        isinstance(branch, Receive)
                        and branch.name == message.target
                        and branch.tag == message.tag
                        and len(branch.params) == len(message.args)
                    ):
                        mapping = {
                            x.name: arg
                            for x, arg in zip(branch.params, message.args, strict=True)
                        }
                        body = substitute(branch.body, mapping)
                        redex = f"{message.target}!{message.tag}"
                        found.append(self.emit(R_READ, redex, (i, j), [body]))
        return found

    def frees(self) -> list[Transition]:
        found = []
        for j, guard in enumerate(self.components):
            if not isinstance(guard, GuardedProcess):
                continue
            for branch in guard.branches:
                if not isinstance(branch, Free) or branch.name not in self.binders:
                    continue
                elsewhere = any(
                    branch.name in free_names(c)
                    for k, c in enumerate(self.components)
                    if k != j
                )
                if elsewhere:
                    continue
                binders = self.binders
                if branch.name not in free_names(branch.body):
                    binders = [b for b in self.binders if b != branch.name]
                found.append(
                    self.emit(R_FREE, f"free {branch.name}", (j,), [branch.body], binders)
                )
        return found

    def unfoldings(self) -> list[Transition]:
        found = []
        for i, component in enumerate(self.components):
            if not isinstance(component, Invoke):
                continue
            definition = self.program.definition(component.name)
            mapping = dict(zip(definition.param_names, component.args, strict=True))
            body = substitute(definition.body, mapping)
            found.append(self.emit(R_DEF, component.name, (i,), [body]))
        return found

    def conditionals(self) -> list[Transition]:
        found = []
        for i, component in enumerate(self.components):
            if not isinstance(component, If):
                continue
            value = evaluate_cond(component.cond)
            if value is None:
                continue
            chosen = component.then if value else component.orelse
            found.append(self.emit(R_IF, print_cond(component.cond), (i,), [chosen]))
        return found

    def prints(self) -> list[Transition]:
        found = []
        for i, component in enumerate(self.components):
            match component:
                case Send(target, tag, (IntLit(value),)) if target == SYSTEM and tag == PRINT_TAG:
                    redex = f"{SYSTEM}!{PRINT_TAG}({value})"
                    found.append(self.emit(R_PRINT, redex, (i,), [], printed=value))
        return found


def transitions(
    p: Process, program: Program, origins: Mapping[str, str] | None = None
) -> list[Transition]:
    """Todos os passos de ``p`` (calculados sobre a forma normal), sem repetições."""
    state, state_origins = normal_form(p, origins)
    stepper = _Stepper(program, state, state_origins)
    candidates = (
        stepper.reads()
        + stepper.frees()
        + stepper.unfoldings()
        + stepper.conditionals()
        + stepper.prints()
    )
    unique: dict[tuple[str, str], Transition] = {}
    for t in candidates:
        unique.setdefault((t.rule, t.key), t)
    return sorted(unique.values(), key=lambda t: (t.rule, t.redex, t.key))


def step(p: Process, program: Program) -> set[tuple[str, Process]]:
    """Conjunto de reduções de um passo ``(regra, estado canônico)``."""
    return {(t.rule, t.target) for t in transitions(p, program)}


def find_unguarded_fail(p: Process) -> str | None:
    """Mailbox de um ``fail`` fora de qualquer prefixo, se houver (P ≡ C[fail a])."""
    state, _ = normal_form(p)
    _, components = nf_parts(state)
    for component in components:
        if isinstance(component, GuardedProcess) and all(
            isinstance(b, Fail) for b in component.branches
        ):
            return component.branches[0].name
    return None
