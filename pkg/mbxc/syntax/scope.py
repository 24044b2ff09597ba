"""
Passagem de escopo: binders distintos, nomes ligados, invocações e tipos.

Dentro de cada definição (e de ``main``) todo binder recebe um nome
distinto; repetições ganham plicas (``s'``). Nomes desconhecidos geram
sugestões pelo RapidFuzz quando disponível, ou pelo difflib.
"""

from __future__ import annotations

import difflib
from collections.abc import Iterable
from dataclasses import replace

from mbxc.depgraph import free_names as graph_free_names
from mbxc.errors import SyntaxIssue
from mbxc.patterns.base import atoms_of
from mbxc.types.base import MailboxType, TypeExpr, TypeRef

from .ast import (
    SYSTEM,
    Arg,
    BinOp,
    Branch,
    Cond,
    Definition,
    Done,
    Fail,
    Free,
    GuardedProcess,
    If,
    Invoke,
    New,
    Par,
    Param,
    Pos,
    Process,
    Program,
    Receive,
    Send,
    Var,
)
from .congruence import fresh_name

try:
    from rapidfuzz import process as fuzzy_process

    RAPIDFUZZ_AVAILABLE = True
except ImportError:
    RAPIDFUZZ_AVAILABLE = False


def did_you_mean(name: str, candidates: Iterable[str]) -> str | None:
    """Candidato mais parecido com ``name``, se houver um razoável."""
    options = sorted(set(candidates))
    if not options:
        return None
    if RAPIDFUZZ_AVAILABLE:
        match = fuzzy_process.extractOne(name, options, score_cutoff=60)
        return match[0] if match else None
    close = difflib.get_close_matches(name, options, n=1, cutoff=0.6)
    return close[0] if close else None


def _hint(name: str, candidates: Iterable[str]) -> str:
    suggestion = did_you_mean(name, candidates)
    return f" (você quis dizer '{suggestion}'?)" if suggestion else ""


class _Resolver:
    def __init__(self, program: Program, issues: list[SyntaxIssue]):
        self.program = program
        self.issues = issues
        self.used: set[str] = set()

    def issue(self, pos: Pos, message: str) -> None:
        line, column = pos or (0, 0)
        self.issues.append(SyntaxIssue(line, column, message))

    # Tipos

    def check_type(self, t: TypeExpr, pos: Pos) -> None:
        match t:
            case TypeRef(name):
                if name not in self.program.types:
                    hint = _hint(name, self.program.types)
                    self.issue(pos, f"tipo não definido: {name}{hint}")
            case MailboxType(_, pattern):
                for atom in atoms_of(pattern):
                    for arg in atom.args:
                        self.check_type(arg, pos)

    # Nomes

    def bind(self, name: str) -> str:
        fresh = fresh_name(name, self.used)
        self.used.add(fresh)
        return fresh

    def lookup(self, name: str, env: dict[str, str], pos: Pos) -> str:
        if name in env:
            return env[name]
        if name != SYSTEM:
            self.issue(pos, f"nome não ligado: {name}{_hint(name, env)}")
        return name

    def arg(self, arg: Arg, env: dict[str, str], pos: Pos) -> Arg:
        match arg:
            case Var(name):
                return Var(self.lookup(name, env, pos))
            case BinOp(op, left, right):
                return BinOp(op, self.arg(left, env, pos), self.arg(right, env, pos))
        return arg

    def params(self, params: tuple[Param, ...], pos: Pos) -> tuple[Param, ...]:
        seen: set[str] = set()
        for param in params:
            if param.name in seen:
                self.issue(pos, f"binder repetido: {param.name}")
            seen.add(param.name)
            self.check_type(param.type, pos)
        return params

    # Processos

    def process(self, p: Process, env: dict[str, str]) -> Process:
        match p:
            case Done():
                return p
            case Send(target, _, args):
                return replace(
                    p,
                    target=self.lookup(target, env, p.pos),
                    args=tuple(self.arg(a, env, p.pos) for a in args),
                )
            case Invoke(name, args):
                self.invocation(p)
                return replace(p, args=tuple(self.arg(a, env, p.pos) for a in args))
            case Par(left, right):
                return replace(p, left=self.process(left, env), right=self.process(right, env))
            case New(name, body):
                fresh = self.bind(name)
                return replace(p, name=fresh, body=self.process(body, {**env, name: fresh}))
            case If(cond, then, orelse):
                cond = Cond(cond.op, self.arg(cond.left, env, p.pos), self.arg(cond.right, env, p.pos))
                return replace(
                    p, cond=cond, then=self.process(then, env), orelse=self.process(orelse, env)
                )
            case GuardedProcess(branches):
                return replace(p, branches=tuple(self.branch(b, env) for b in branches))
        raise TypeError(f"processo inválido: {p!r}")

    def branch(self, branch: Branch, env: dict[str, str]) -> Branch:
        name = self.lookup(branch.name, env, branch.pos)
        match branch:
            case Fail():
                return replace(branch, name=name)
            case Free(_, body):
                return replace(branch, name=name, body=self.process(body, env))
            case Receive(_, _, params, body):
                self.params(params, branch.pos)
                inner = dict(env)
                renamed = []
                for param in params:
                    fresh = self.bind(param.name)
                    inner[param.name] = fresh
                    renamed.append(Param(fresh, param.type))
                return replace(
                    branch, name=name, params=tuple(renamed), body=self.process(body, inner)
                )
        raise TypeError(f"ramo inválido: {branch!r}")

    def invocation(self, p: Invoke) -> None:
        definition = self.program.definitions.get(p.name)
        if definition is None:
            hint = _hint(p.name, self.program.definitions)
            self.issue(p.pos, f"processo não definido: {p.name}{hint}")
        elif len(definition.params) != len(p.args):
            self.issue(
                p.pos,
                f"aridade: {p.name} espera {len(definition.params)} argumento(s), "
                f"recebeu {len(p.args)}",
            )

    # Itens

    def definition(self, definition: Definition) -> Definition:
        params = self.params(definition.params, definition.pos)
        names = {p.name for p in params}
        self.used = names | {SYSTEM}
        extra = graph_free_names(definition.graph) - names
        for name in sorted(extra):
            self.issue(definition.pos, f"o grafo de {definition.name} cita {name}, que não é parâmetro")
        env = {name: name for name in names}
        return replace(definition, body=self.process(definition.body, env))

    def main(self, body: Process) -> Process:
        self.used = {SYSTEM}
        return self.process(body, {})


def resolve_program(program: Program) -> tuple[Program, list[SyntaxIssue]]:
    """Renomeia binders e devolve os problemas de escopo encontrados."""
    issues: list[SyntaxIssue] = []
    resolver = _Resolver(program, issues)
    for t in program.types.values():
        resolver.check_type(t, None)
    definitions = {
        name: resolver.definition(d) for name, d in program.definitions.items()
    }
    main = resolver.main(program.main) if program.main is not None else None
    resolved = Program(
        types=program.types,
        definitions=definitions,
        main=main,
        main_pos=program.main_pos,
    )
    return resolved, issues
