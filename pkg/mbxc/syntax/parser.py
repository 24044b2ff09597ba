"""
Parser dos programas ``.mbx``.

A gramática (``grammar.lark``) é LALR; o ``Transformer`` monta a árvore
e a passagem de escopo (``scope.py``) renomeia binders repetidos e
verifica nomes, processos, aridades e tipos referenciados.
"""

from __future__ import annotations

import logging

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from mbxc.depgraph import EMPTY, DepGraph, Edge, Restrict, restrict, union
from mbxc.errors import ParseError, SyntaxIssue
from mbxc.patterns.base import ONE, ZERO, Atom, Hole, Pattern, Product, Star, Sum
from mbxc.types.base import INT, TypeExpr, TypeRef, TypeTable, inp, out

from .ast import (
    BinOp,
    Cond,
    Definition,
    Done,
    Fail,
    Free,
    GuardedProcess,
    If,
    IntLit,
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
from .congruence import all_names, fresh_name
from .scope import resolve_program

logger = logging.getLogger(__name__)

_PARSER = Lark.open(
    "grammar.lark",
    rel_to=__file__,
    parser="lalr",
    start=["start", "type_start", "pattern_start", "process_start", "graph_start"],
    propagate_positions=True,
    maybe_placeholders=True,
)

_CHOICE_TAG = "pick"


def _pos(meta) -> Pos:
    if getattr(meta, "empty", True):
        return None
    return (meta.line, meta.column)


def _token_pos(token: Token) -> Pos:
    return (token.line, token.column)


@v_args(inline=True, meta=True)
class _Builder(Transformer):
    """Árvore do Lark → nós de ``ast``; problemas semânticos locais vão para ``issues``."""

    def __init__(self):
        super().__init__()
        self.issues: list[SyntaxIssue] = []

    def _issue(self, pos: Pos, message: str) -> None:
        line, column = pos or (0, 0)
        self.issues.append(SyntaxIssue(line, column, message))

    # Tipos e padrões

    def int_type(self, meta) -> TypeExpr:
        return INT

    def input_type(self, meta, pattern: Pattern) -> TypeExpr:
        return inp(pattern)

    def output_type(self, meta, pattern: Pattern) -> TypeExpr:
        return out(pattern)

    def type_ref(self, meta, name: Token) -> TypeExpr:
        return TypeRef(str(name))

    def types(self, meta, *items: TypeExpr) -> tuple[TypeExpr, ...]:
        return items

    def psum(self, meta, left: Pattern, right: Pattern) -> Pattern:
        return Sum(left, right)

    def pprod(self, meta, left: Pattern, right: Pattern) -> Pattern:
        return Product(left, right)

    def pstar(self, meta, body: Pattern) -> Pattern:
        return Star(body)

    def pconst(self, meta, token: Token) -> Pattern:
        if token not in ("0", "1"):
            self._issue(_token_pos(token), f"constante de padrão inválida: {token} (use 0 ou 1)")
        return ONE if token == "1" else ZERO

    def patom_bare(self, meta, tag: Token) -> Pattern:
        return Atom(str(tag))

    def patom(self, meta, tag: Token, args: tuple[TypeExpr, ...] | None) -> Pattern:
        return Atom(str(tag), args or ())

    def phole(self, meta, token: Token) -> Pattern:
        return Hole(str(token))

    # Expressões

    def lit(self, meta, token: Token) -> IntLit:
        return IntLit(int(token))

    def var(self, meta, token: Token) -> Var:
        return Var(str(token))

    def add(self, meta, left, right) -> BinOp:
        return BinOp("+", left, right)

    def sub(self, meta, left, right) -> BinOp:
        return BinOp("-", left, right)

    def cond(self, meta, left, op: Token, right) -> Cond:
        return Cond(str(op), left, right)

    def args(self, meta, *items):
        return items

    def names(self, meta, *tokens: Token) -> tuple[str, ...]:
        return tuple(str(t) for t in tokens)

    def param(self, meta, name: Token, t: TypeExpr) -> Param:
        return Param(str(name), t)

    def params(self, meta, *items: Param) -> tuple[Param, ...]:
        return items

    # Processos

    def done(self, meta) -> Process:
        return Done(pos=_pos(meta))

    def fail(self, meta, name: Token) -> Process:
        pos = _pos(meta)
        return GuardedProcess((Fail(str(name), pos=pos),), pos=pos)

    def free(self, meta, name: Token, body: Process) -> Process:
        pos = _pos(meta)
        return GuardedProcess((Free(str(name), body, pos=pos),), pos=pos)

    def receive(self, meta, name: Token, tag: Token, params, body: Process) -> Process:
        pos = _pos(meta)
        branch = Receive(str(name), str(tag), params or (), body, pos=pos)
        return GuardedProcess((branch,), pos=pos)

    def receive_bare(self, meta, name: Token, tag: Token, body: Process) -> Process:
        return self.receive(meta, name, tag, None, body)

    def send(self, meta, target: Token, tag: Token, args) -> Process:
        return Send(str(target), str(tag), args or (), pos=_pos(meta))

    def send_bare(self, meta, target: Token, tag: Token) -> Process:
        return self.send(meta, target, tag, None)

    def invoke(self, meta, name: Token, args) -> Process:
        return Invoke(str(name), args or (), pos=_pos(meta))

    def new(self, meta, names: tuple[str, ...], body: Process) -> Process:
        for name in reversed(names):
            body = New(name, body, pos=_pos(meta))
        return body

    def if_(self, meta, cond: Cond, then: Process, orelse: Process) -> Process:
        return If(cond, then, orelse, pos=_pos(meta))

    def either(self, meta, left: Process, right: Process) -> Process:
        """``either {P} or {Q}`` vira a escolha codificada por uma mailbox local."""
        pos = _pos(meta)
        c = fresh_name("c", all_names(left) | all_names(right))
        branches = tuple(
            Receive(c, _CHOICE_TAG, (), GuardedProcess((Free(c, body, pos=pos),), pos=pos), pos=pos)
            for body in (left, right)
        )
        chooser = Par(Send(c, _CHOICE_TAG, (), pos=pos), GuardedProcess(branches, pos=pos), pos=pos)
        return New(c, chooser, pos=pos)

    def par(self, meta, left: Process, right: Process) -> Process:
        return Par(left, right, pos=_pos(meta))

    def guard_sum(self, meta, left: Process, right: Process) -> Process:
        parts = []
        for side in (left, right):
            if isinstance(side, GuardedProcess):
                parts.extend(side.branches)
            else:
                self._issue(
                    side.pos or _pos(meta),
                    f"só ações de guard podem ser somadas com '+', não '{side}'",
                )
        return GuardedProcess(tuple(parts), pos=left.pos or _pos(meta))

    # Grafos

    def edge(self, meta, u: Token, v: Token) -> DepGraph:
        return Edge(str(u), str(v))

    def gnew(self, meta, name: Token, body: DepGraph) -> DepGraph:
        return restrict(str(name), body)

    def gnew_block(self, meta, name: Token, body: DepGraph | None) -> DepGraph:
        return restrict(str(name), body or EMPTY)

    def graph(self, meta, *items: DepGraph) -> DepGraph:
        # arestas primeiro, escopos depois: a mesma ordem da impressão
        edges = [g for g in items if not isinstance(g, Restrict)]
        scopes = [g for g in items if isinstance(g, Restrict)]
        return union(*edges, *scopes)

    def graph_block(self, meta, graph: DepGraph | None) -> DepGraph:
        return graph or EMPTY

    # Itens de programa

    def type_def(self, meta, name: Token, t: TypeExpr):
        return ("type", str(name), t, _pos(meta))

    def proc_def(self, meta, name: Token, params, graph, body: Process):
        definition = Definition(str(name), params or (), body, graph or EMPTY, pos=_pos(meta))
        return ("def", definition.name, definition, definition.pos)

    def main_def(self, meta, body: Process):
        return ("main", "main", body, _pos(meta))

    def start(self, meta, *items):
        return list(items)

    def type_start(self, meta, t):
        return t

    def pattern_start(self, meta, pattern):
        return pattern

    def process_start(self, meta, p):
        return p

    def graph_start(self, meta, graph):
        return graph or EMPTY


def _describe(exc: UnexpectedInput) -> str:
    if isinstance(exc, UnexpectedToken):
        if exc.token.type == "$END":
            return "fim de entrada inesperado"
        expected = ", ".join(sorted(exc.expected))
        return f"símbolo inesperado '{exc.token}'; esperado: {expected}"
    if isinstance(exc, UnexpectedCharacters):
        return f"caractere inesperado '{exc.char}'"
    if isinstance(exc, UnexpectedEOF):
        return "fim de entrada inesperado"
    return str(exc)


def _run(text: str, start: str):
    try:
        tree = _PARSER.parse(text, start=start)
    except UnexpectedInput as exc:
        line = exc.line if exc.line and exc.line > 0 else text.count("\n") + 1
        column = exc.column if exc.column and exc.column > 0 else 1
        raise ParseError([SyntaxIssue(line, column, _describe(exc))])
    builder = _Builder()
    result = builder.transform(tree)
    if builder.issues:
        raise ParseError(builder.issues)
    return result


def _assemble(items) -> tuple[Program, list[SyntaxIssue]]:
    issues: list[SyntaxIssue] = []
    program = Program(types=TypeTable())
    for kind, name, value, pos in items:
        line, column = pos or (0, 0)
        if kind == "type":
            if name in program.types:
                issues.append(SyntaxIssue(line, column, f"tipo redefinido: {name}"))
            program.types.definitions[name] = value
            program.types.positions[name] = pos
        elif kind == "def":
            if name in program.definitions:
                issues.append(SyntaxIssue(line, column, f"processo redefinido: {name}"))
            program.definitions[name] = value
        else:
            if program.main is not None:
                issues.append(SyntaxIssue(line, column, "main definido mais de uma vez"))
            program.main = value
            program.main_pos = pos
    return program, issues


def _include(program: Program, prelude: Program) -> list[SyntaxIssue]:
    issues = []
    for name, t in prelude.types.definitions.items():
        if name in program.types:
            issues.append(SyntaxIssue(0, 0, f"tipo já definido pelo prelúdio: {name}"))
        program.types.definitions[name] = t
        program.types.positions[name] = prelude.types.positions.get(name)
    for name, definition in prelude.definitions.items():
        if name in program.definitions:
            issues.append(SyntaxIssue(0, 0, f"processo já definido pelo prelúdio: {name}"))
        program.definitions[name] = definition
    return issues


def parse(text: str, prelude: Program | None = None) -> Program:
    """
    Texto → ``Program``; levanta ``ParseError`` com todos os problemas.

    ``prelude`` contribui tipos e definições prontos (por exemplo os
    gerados de uma sessão) que o texto pode citar.
    """
    program, issues = _assemble(_run(text, "start"))
    if prelude is not None:
        issues.extend(_include(program, prelude))
    program, scope_issues = resolve_program(program)
    issues.extend(scope_issues)
    if issues:
        raise ParseError(issues)
    logger.debug(
        "✅ programa com %d tipos e %d definições",
        len(program.types),
        len(program.definitions),
    )
    return program


def parse_process(text: str) -> Process:
    """Processo isolado, sem verificação de escopo."""
    return _run(text, "process_start")


def parse_type(text: str) -> TypeExpr:
    return _run(text, "type_start")


def parse_pattern(text: str) -> Pattern:
    return _run(text, "pattern_start")


def parse_graph(text: str) -> DepGraph:
    return _run(text, "graph_start")
