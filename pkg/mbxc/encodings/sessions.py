"""
Codificação de tipos de sessão binários (com fork/join) em tipos de
mailbox e geração do processo que medeia a sessão.

Uma sessão é um objeto concorrente que usa a mailbox ``self``: cada
interação guarda uma mensagem do lado que envia (``send``, ``left``,
``right``) e uma do lado que recebe (``receive``); o mediador repassa o
payload e devolve a cada lado uma referência a ``self`` com o tipo do
restante da conversa.

Recursão é feita por nomes (``Loop = ?int.Loop & end``); cada subtipo
alcançável vira um tipo nomeado ``T``, ``T_1``, ... (e ``coT``, ``coT_1``
para o dual) e uma definição ``Session_T``, ``Session_T_1``, ...
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from mbxc.depgraph import EMPTY, edges_from
from mbxc.errors import ParseError, SessionError, SyntaxIssue
from mbxc.patterns import ONE, Atom, Pattern, Product, Sum, pprod
from mbxc.syntax.ast import (
    DONE,
    Definition,
    Free,
    GuardedProcess,
    Invoke,
    Param,
    Process,
    Program,
    Receive,
    Send,
    Var,
    par_all,
)
from mbxc.syntax.parser import parse_type
from mbxc.types import INT, TypeExpr, TypeRef, TypeTable, inp, out

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Tipos de sessão
# ---------------------------------------------------------------------------


class SessionType:
    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class End(SessionType):
    pass


@dataclass(frozen=True)
class In(SessionType):
    payload: TypeExpr
    cont: SessionType


@dataclass(frozen=True)
class Out(SessionType):
    payload: TypeExpr
    cont: SessionType


@dataclass(frozen=True)
class ExtChoice(SessionType):
    left: SessionType
    right: SessionType


@dataclass(frozen=True)
class IntChoice(SessionType):
    left: SessionType
    right: SessionType


@dataclass(frozen=True)
class Join(SessionType):
    """Coleta todas as mensagens ``items`` e segue como ``cont``."""

    items: tuple[Atom, ...]
    cont: SessionType


@dataclass(frozen=True)
class Fork(SessionType):
    """Envia todas as mensagens ``items`` (por quaisquer processos) e segue como ``cont``."""

    items: tuple[Atom, ...]
    cont: SessionType


@dataclass(frozen=True)
class Ref(SessionType):
    """Referência a uma sessão nomeada (ou ao seu dual)."""

    name: str
    co: bool = False


END = End()


def dual(t: SessionType) -> SessionType:
    """Troca entradas por saídas, escolhas internas por externas e fork por join."""
    match t:
        case End():
            return t
        case In(payload, cont):
            return Out(payload, dual(cont))
        case Out(payload, cont):
            return In(payload, dual(cont))
        case ExtChoice(left, right):
            return IntChoice(dual(left), dual(right))
        case IntChoice(left, right):
            return ExtChoice(dual(left), dual(right))
        case Join(items, cont):
            return Fork(items, dual(cont))
        case Fork(items, cont):
            return Join(items, dual(cont))
        case Ref(name, co):
            return Ref(name, not co)
    raise TypeError(f"tipo de sessão inválido: {t!r}")


def render(t: SessionType) -> str:
    def items(atoms: tuple[Atom, ...]) -> str:
        return ", ".join(str(a) for a in atoms)

    def payload(p: TypeExpr) -> str:
        return str(p) if isinstance(p, TypeRef) or p == INT else f"[{p}]"

    def prefix(s: SessionType) -> str:
        text = render(s)
        return f"({text})" if isinstance(s, ExtChoice | IntChoice) else text

    match t:
        case End():
            return "end"
        case In(p, cont):
            return f"?{payload(p)}.{prefix(cont)}"
        case Out(p, cont):
            return f"!{payload(p)}.{prefix(cont)}"
        case ExtChoice(left, right):
            return f"{prefix(left)} & {render(right)}"
        case IntChoice(left, right):
            return f"{prefix(left)} (+) {render(right)}"
        case Join(atoms, cont):
            return f"join{{{items(atoms)}}};{prefix(cont)}"
        case Fork(atoms, cont):
            return f"fork{{{items(atoms)}}};{prefix(cont)}"
        case Ref(name, co):
            return f"co {name}" if co else name
    raise TypeError(f"tipo de sessão inválido: {t!r}")


@dataclass
class SessionFile:
    """Sessões nomeadas; a primeira é a raiz."""

    sessions: dict[str, SessionType] = field(default_factory=dict)

    @property
    def root(self) -> str:
        return next(iter(self.sessions))

    def resolve(self, t: SessionType) -> SessionType:
        """Desdobra referências até um construtor estrutural."""
        seen: list[Ref] = []
        while isinstance(t, Ref):
            if t in seen:
                cycle = " -> ".join(render(r) for r in [*seen, t])
                raise SessionError(f"sessão não contrativa: {cycle}")
            if t.name not in self.sessions:
                raise SessionError(f"sessão não definida: {t.name}")
            seen.append(t)
            body = self.sessions[t.name]
            t = dual(body) if t.co else body
        return t


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_PARSER = Lark.open("session.lark", rel_to=__file__, parser="lalr", maybe_placeholders=True)


@v_args(inline=True)
class _SessionBuilder(Transformer):
    def start(self, *defs) -> SessionFile:
        result = SessionFile()
        for name, body in defs:
            if name in result.sessions:
                raise SessionError(f"sessão redefinida: {name}")
            result.sessions[name] = body
        return result

    def session_def(self, name: Token, body: SessionType):
        return str(name), body

    def end(self) -> SessionType:
        return END

    def s_in(self, payload: TypeExpr, cont: SessionType) -> SessionType:
        return In(payload, cont)

    def s_out(self, payload: TypeExpr, cont: SessionType) -> SessionType:
        return Out(payload, cont)

    def ext_choice(self, left, right) -> SessionType:
        return ExtChoice(left, right)

    def int_choice(self, left, right) -> SessionType:
        return IntChoice(left, right)

    def s_join(self, items, cont) -> SessionType:
        return Join(items or (), cont)

    def s_fork(self, items, cont) -> SessionType:
        return Fork(items or (), cont)

    def s_ref(self, name: Token) -> SessionType:
        return Ref(str(name))

    def items(self, *atoms: Atom) -> tuple[Atom, ...]:
        return atoms

    def item(self, tag: Token, payloads) -> Atom:
        return Atom(str(tag), payloads or ())

    def item_bare(self, tag: Token) -> Atom:
        return Atom(str(tag))

    def payloads(self, *types: TypeExpr) -> tuple[TypeExpr, ...]:
        return types

    def p_int(self) -> TypeExpr:
        return INT

    def p_ref(self, name: Token) -> TypeExpr:
        return TypeRef(str(name))

    def p_type(self, token: Token) -> TypeExpr:
        return parse_type(str(token)[1:-1])


def parse_session(text: str) -> SessionFile:
    """Texto ``.st`` → ``SessionFile`` regular; levanta ``ParseError`` ou ``SessionError``."""
    try:
        tree = _PARSER.parse(text)
    except UnexpectedInput as exc:
        raise ParseError([SyntaxIssue(exc.line, exc.column, f"sessão malformada: {exc}")])
    try:
        result = _SessionBuilder().transform(tree)
    except VisitError as exc:
        raise exc.orig_exc from None
    problems = check_regular(result)
    if problems:
        raise SessionError("; ".join(problems))
    return result


def check_regular(spec: SessionFile) -> list[str]:
    """Referências definidas, recursão contrativa e tags iguais com tipos iguais."""
    problems: list[str] = []
    for name in spec.sessions:
        try:
            nodes(spec, Ref(name))
        except SessionError as exc:
            problems.append(str(exc))
            continue
    if problems:
        return list(dict.fromkeys(problems))
    for node in nodes(spec, Ref(spec.root)):
        if isinstance(node, Join | Fork):
            seen: dict[str, tuple[TypeExpr, ...]] = {}
            for atom in node.items:
                if seen.setdefault(atom.tag, atom.args) != atom.args:
                    problems.append(f"a tag {atom.tag} aparece com tipos diferentes em {node}")
    return problems


def _continuations(t: SessionType) -> list[SessionType]:
    match t:
        case In(_, cont) | Out(_, cont) | Join(_, cont) | Fork(_, cont):
            return [cont]
        case ExtChoice(left, right) | IntChoice(left, right):
            return [left, right]
    return []


def nodes(spec: SessionFile, start: SessionType) -> list[SessionType]:
    """Subtipos estruturais alcançáveis, em ordem de descoberta."""
    found: list[SessionType] = []
    pending = [spec.resolve(start)]
    while pending:
        node = pending.pop(0)
        if node in found:
            continue
        found.append(node)
        pending.extend(spec.resolve(c) for c in _continuations(node))
    return found


# ---------------------------------------------------------------------------
# Codificação em padrões
# ---------------------------------------------------------------------------


class _Names:
    """Nomes de tipo ``T_k``/``coT_k`` dos subtipos alcançáveis."""

    def __init__(self, spec: SessionFile, prefix: str):
        self.spec = spec
        self.prefix = prefix
        self.nodes = nodes(spec, Ref(spec.root))
        self.index = {n: k for k, n in enumerate(self.nodes)}
        self.co_index = {dual(n): k for k, n in enumerate(self.nodes)}

    def suffix(self, k: int) -> str:
        return "" if k == 0 else f"_{k}"

    def type_name(self, k: int, co: bool = False) -> str:
        return f"{'co' if co else ''}{self.prefix}{self.suffix(k)}"

    def locate(self, t: SessionType) -> tuple[int, bool]:
        node = self.spec.resolve(t)
        if node in self.index:
            return self.index[node], False
        return self.co_index[node], True

    def endpoint(self, t: SessionType) -> TypeExpr:
        """``!E(t)`` como referência nomeada."""
        k, co = self.locate(t)
        return TypeRef(self.type_name(k, co))


def encode_pattern(t: SessionType, names: _Names | None = None) -> Pattern:
    """E(t); continuações viram ``!E(·)`` embutidos ou referências nomeadas."""

    def endpoint(s: SessionType) -> TypeExpr:
        if names is not None:
            return names.endpoint(s)
        return out(encode_pattern(s))

    match t:
        case End():
            return ONE
        case In(payload, cont):
            return Atom("receive", (out(Atom("reply", (payload, endpoint(cont)))),))
        case Out(payload, cont):
            return Atom("send", (payload, out(Atom("reply", (endpoint(cont),)))))
        case ExtChoice(left, right):
            choice = Sum(Atom("left", (endpoint(left),)), Atom("right", (endpoint(right),)))
            return Atom("receive", (out(choice),))
        case IntChoice(left, right):
            return Sum(
                Atom("left", (out(Atom("reply", (endpoint(left),))),)),
                Atom("right", (out(Atom("reply", (endpoint(right),))),)),
            )
        case Fork(items, cont):
            return pprod([Atom("send", (out(Atom("reply", (endpoint(cont),))),)), *items])
        case Join(items, cont):
            collected = pprod([*items, Atom("reply", (endpoint(cont),))])
            return Atom("receive", (out(collected),))
        case Ref():
            if names is None:
                raise SessionError(f"referência {t} exige a tabela de sessões")
            return encode_pattern(names.spec.resolve(t), names)
    raise TypeError(f"tipo de sessão inválido: {t!r}")


# ---------------------------------------------------------------------------
# Geração do mediador
# ---------------------------------------------------------------------------

SELF = "self"


class _Generator:
    def __init__(self, spec: SessionFile, prefix: str):
        self.names = _Names(spec, prefix)
        self.program = Program(types=TypeTable())

    def session_name(self, k: int) -> str:
        return f"Session_{self.names.type_name(k)}"

    def session_of(self, t: SessionType) -> str:
        # o mediador do dual é o mesmo: E(T)·E(coT) comuta
        return self.session_name(self.names.locate(t)[0])

    def encode(self, t: SessionType) -> Pattern:
        return encode_pattern(self.names.spec.resolve(t), self.names)

    def interaction(
        self,
        selector: str,
        sender: TypeExpr,
        payload: TypeExpr | None,
        receiver: TypeExpr,
        notification: Process,
        cont: SessionType,
    ) -> Receive:
        """``self?sel(x, s).self?receive(r).(s!reply(self) | notificação | Session(self))``."""
        sender_params = (Param("x", payload), Param("s", sender)) if payload else (
            Param("s", sender),
        )
        forward = par_all(
            [
                Send("s", "reply", (Var(SELF),)),
                notification,
                Invoke(self.session_of(cont), (Var(SELF),)),
            ]
        )
        inner = GuardedProcess((Receive(SELF, "receive", (Param("r", receiver),), forward),))
        return Receive(SELF, selector, sender_params, inner)

    def body(self, k: int, node: SessionType) -> Process:
        names = self.names
        match node:
            case End():
                return GuardedProcess((Free(SELF, DONE),))
            case In(payload, cont) | Out(payload, cont):
                mine, theirs = names.endpoint(cont), names.endpoint(dual(cont))
                sender, receiver = (theirs, mine) if isinstance(node, In) else (mine, theirs)
                return GuardedProcess(
                    (
                        self.interaction(
                            "send",
                            out(Atom("reply", (sender,))),
                            payload,
                            out(Atom("reply", (payload, receiver))),
                            Send("r", "reply", (Var("x"), Var(SELF))),
                            cont,
                        ),
                    )
                )
            case ExtChoice(left, right) | IntChoice(left, right):
                external = isinstance(node, ExtChoice)
                options = out(
                    Sum(
                        Atom("left", (names.endpoint(left if external else dual(left)),)),
                        Atom("right", (names.endpoint(right if external else dual(right)),)),
                    )
                )
                branches = []
                for tag, cont in (("left", left), ("right", right)):
                    sender = names.endpoint(dual(cont) if external else cont)
                    branches.append(
                        self.interaction(
                            tag,
                            out(Atom("reply", (sender,))),
                            None,
                            options,
                            Send("r", tag, (Var(SELF),)),
                            cont,
                        )
                    )
                return GuardedProcess(tuple(branches))
            case Join(items, cont) | Fork(items, cont):
                collector_cont = cont if isinstance(node, Join) else dual(cont)
                sender_cont = dual(cont) if isinstance(node, Join) else cont
                s_type = out(Atom("reply", (names.endpoint(sender_cont),)))
                r_type = out(pprod([*items, Atom("reply", (names.endpoint(collector_cont),))]))
                self.collectors(k, items, cont, names.endpoint(sender_cont), collector_cont)
                collect = Invoke(self.join_name(k, len(items)), (Var(SELF), Var("s"), Var("r")))
                inner = GuardedProcess(
                    (Receive(SELF, "receive", (Param("r", r_type),), collect),)
                )
                return GuardedProcess((Receive(SELF, "send", (Param("s", s_type),), inner),))
        raise TypeError(f"tipo de sessão inválido: {node!r}")

    def join_name(self, k: int, remaining: int) -> str:
        return f"Join_{self.names.type_name(k)}_{remaining}"

    def collectors(
        self,
        k: int,
        items: tuple[Atom, ...],
        cont: SessionType,
        sender_endpoint: TypeExpr,
        collector_cont: SessionType,
    ) -> None:
        """``Join_T_k_m(self, s, r)`` repassa os ``m`` itens restantes, o primeiro antes."""
        for m in range(len(items) + 1):
            pending = items[len(items) - m :]
            params = (
                Param(SELF, inp(pprod(pending))),
                Param("s", out(Atom("reply", (sender_endpoint,)))),
                Param(
                    "r",
                    out(pprod([*pending, Atom("reply", (self.names.endpoint(collector_cont),))])),
                ),
            )
            if not pending:
                body = par_all(
                    [
                        Send("s", "reply", (Var(SELF),)),
                        Send("r", "reply", (Var(SELF),)),
                        Invoke(self.session_of(cont), (Var(SELF),)),
                    ]
                )
            else:
                first = pending[0]
                binders = tuple(Param(f"x{i}", t) for i, t in enumerate(first.args, start=1))
                forward = par_all(
                    [
                        Send("r", first.tag, tuple(Var(x.name) for x in binders)),
                        Invoke(self.join_name(k, m - 1), (Var(SELF), Var("s"), Var("r"))),
                    ]
                )
                body = GuardedProcess((Receive(SELF, first.tag, binders, forward),))
            graph = edges_from(SELF, ["s", "r"])
            name = self.join_name(k, m)
            self.program.definitions[name] = Definition(name, params, body, graph)

    def generate(self) -> Program:
        names = self.names
        for k, node in enumerate(names.nodes):
            names_k = (names.type_name(k), names.type_name(k, co=True))
            self.program.types.definitions[names_k[0]] = out(self.encode(node))
            self.program.types.definitions[names_k[1]] = out(self.encode(dual(node)))
        for k, node in enumerate(names.nodes):
            declared = inp(Product(self.encode(node), self.encode(dual(node))))
            name = self.session_name(k)
            self.program.definitions[name] = Definition(
                name, (Param(SELF, declared),), self.body(k, node), EMPTY
            )
        logger.info(
            "✅ sessão %s: %d subtipos, %d definições",
            names.spec.root,
            len(names.nodes),
            len(self.program.definitions),
        )
        return self.program


def generate_session_process(spec: SessionFile | SessionType, prefix: str | None = None) -> Program:
    """Tipos ``T``/``coT`` e definições ``Session_T`` para a sessão raiz."""
    if isinstance(spec, SessionType):
        spec = SessionFile({prefix or "T": spec})
    return _Generator(spec, prefix or spec.root).generate()
