"""
Nomes livres, substituição e forma normal módulo congruência estrutural.

A forma normal achata composições paralelas, descarta ``done``, remove
ramos ``fail`` que não estão sozinhos, ordena ramos e componentes e sobe
as restrições o máximo possível. No nível de topo os nomes restritos
viram posicionais (``_0``, ``_1``, ...); dentro de continuações os
binders mantêm o nome do fonte (com plicas quando colidem).
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import replace

from mbxc.errors import MailboxError

from .ast import (
    ARITHMETIC,
    COMPARISONS,
    Arg,
    BinOp,
    Branch,
    Cond,
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
    Process,
    Receive,
    Send,
    Var,
    par_all,
)
from .printer import print_process

_MAX_PERMUTATIONS = 720
_TEMP = "%"


# ---------------------------------------------------------------------------
# Nomes
# ---------------------------------------------------------------------------


def arg_names(arg: Arg) -> frozenset[str]:
    match arg:
        case Var(name):
            return frozenset({name})
        case BinOp(_, left, right):
            return arg_names(left) | arg_names(right)
    return frozenset()


def _names_of_args(args: tuple[Arg, ...]) -> frozenset[str]:
    return frozenset().union(*(arg_names(a) for a in args))


def free_names(p: Process) -> frozenset[str]:
    """fn(P): ``new`` liga no corpo; binders de recepção ligam na continuação."""
    match p:
        case Done():
            return frozenset()
        case Send(target, _, args):
            return frozenset({target}) | _names_of_args(args)
        case Invoke(_, args):
            return _names_of_args(args)
        case Par(left, right):
            return free_names(left) | free_names(right)
        case New(name, body):
            return free_names(body) - {name}
        case If(cond, then, orelse):
            return (
                arg_names(cond.left)
                | arg_names(cond.right)
                | free_names(then)
                | free_names(orelse)
            )
        case GuardedProcess(branches):
            return frozenset().union(*(branch_free_names(b) for b in branches))
    raise TypeError(f"processo inválido: {p!r}")


def branch_free_names(branch: Branch) -> frozenset[str]:
    match branch:
        case Fail(name):
            return frozenset({name})
        case Free(name, body):
            return frozenset({name}) | free_names(body)
        case Receive(name, _, params, body):
            return frozenset({name}) | (free_names(body) - {x.name for x in params})
    raise TypeError(f"ramo inválido: {branch!r}")


def all_names(p: Process) -> frozenset[str]:
    """Todos os identificadores de nome, livres ou ligados."""
    match p:
        case New(name, body):
            return all_names(body) | {name}
        case Par(left, right):
            return all_names(left) | all_names(right)
        case If(_, then, orelse):
            return free_names(p) | all_names(then) | all_names(orelse)
        case GuardedProcess(branches):
            names = set(free_names(p))
            for b in branches:
                if isinstance(b, Free | Receive):
                    names |= all_names(b.body)
                if isinstance(b, Receive):
                    names |= {x.name for x in b.params}
            return frozenset(names)
    return free_names(p)


def fresh_name(base: str, avoid: set[str] | frozenset[str]) -> str:
    """``base`` com plicas até não colidir."""
    candidate = base
    while candidate in avoid:
        candidate += "'"
    return candidate


# ---------------------------------------------------------------------------
# Expressões inteiras
# ---------------------------------------------------------------------------


def evaluate(arg: Arg) -> Arg:
    """Dobra constantes; devolve a expressão residual quando há variáveis."""
    if isinstance(arg, BinOp):
        left, right = evaluate(arg.left), evaluate(arg.right)
        if isinstance(left, IntLit) and isinstance(right, IntLit):
            return IntLit(ARITHMETIC[arg.op](left.value, right.value))
        return BinOp(arg.op, left, right)
    return arg


def evaluate_cond(cond: Cond) -> bool | None:
    """Valor da comparação, ou None se ainda depende de variáveis."""
    left, right = evaluate(cond.left), evaluate(cond.right)
    if isinstance(left, IntLit) and isinstance(right, IntLit):
        return COMPARISONS[cond.op](left.value, right.value)
    return None


# ---------------------------------------------------------------------------
# Substituição
# ---------------------------------------------------------------------------


def substitute(p: Process, mapping: Mapping[str, Arg | str]) -> Process:
    """Substituição simultânea que evita captura (binders recebem plicas)."""
    normalized = {k: Var(v) if isinstance(v, str) else v for k, v in mapping.items()}
    normalized = {k: v for k, v in normalized.items() if v != Var(k)}
    return _subst(p, normalized)


def _subst_arg(arg: Arg, m: Mapping[str, Arg]) -> Arg:
    match arg:
        case Var(name):
            return m.get(name, arg)
        case BinOp(op, left, right):
            return BinOp(op, _subst_arg(left, m), _subst_arg(right, m))
    return arg


def _subst_name(name: str, m: Mapping[str, Arg]) -> str:
    image = m.get(name)
    if image is None:
        return name
    if not isinstance(image, Var):
        raise MailboxError(f"inteiro {image} usado como mailbox no lugar de {name}")
    return image.name


def _bind(
    names: list[str], body: Process, m: Mapping[str, Arg]
) -> tuple[list[str], dict[str, Arg]]:
    """Entra no escopo de ``names``: tira a sombra e renova binders capturáveis."""
    inner = {k: v for k, v in m.items() if k not in names}
    body_free = free_names(body)
    captured: set[str] = set()
    for key, value in inner.items():
        if key in body_free:
            captured |= arg_names(value)
    renamed = []
    for name in names:
        if name in captured:
            avoid = captured | body_free | set(names) | set(renamed)
            fresh = fresh_name(name, avoid)
            inner[name] = Var(fresh)
            renamed.append(fresh)
        else:
            renamed.append(name)
    return renamed, inner


def _subst(p: Process, m: Mapping[str, Arg]) -> Process:
    if not m:
        return p
    match p:
        case Done():
            return p
        case Send(target, _, args):
            return replace(
                p,
                target=_subst_name(target, m),
                args=tuple(_subst_arg(a, m) for a in args),
            )
        case Invoke(_, args):
            return replace(p, args=tuple(_subst_arg(a, m) for a in args))
        case Par(left, right):
            return replace(p, left=_subst(left, m), right=_subst(right, m))
        case New(name, body):
            (fresh,), inner = _bind([name], body, m)
            return replace(p, name=fresh, body=_subst(body, inner))
        case If(cond, then, orelse):
            cond = Cond(cond.op, _subst_arg(cond.left, m), _subst_arg(cond.right, m))
            return replace(p, cond=cond, then=_subst(then, m), orelse=_subst(orelse, m))
        case GuardedProcess(branches):
            return replace(p, branches=tuple(_subst_branch(b, m) for b in branches))
    raise TypeError(f"processo inválido: {p!r}")


def _subst_branch(branch: Branch, m: Mapping[str, Arg]) -> Branch:
    name = _subst_name(branch.name, m)
    match branch:
        case Fail():
            return replace(branch, name=name)
        case Free(_, body):
            return replace(branch, name=name, body=_subst(body, m))
        case Receive(_, _, params, body):
            fresh, inner = _bind([x.name for x in params], body, m)
            new_params = tuple(
                Param(n, x.type) for n, x in zip(fresh, params, strict=True)
            )
            return replace(branch, name=name, params=new_params, body=_subst(body, inner))
    raise TypeError(f"ramo inválido: {branch!r}")


# ---------------------------------------------------------------------------
# Renomeação alfa canônica (chaves de comparação)
# ---------------------------------------------------------------------------


def _alpha(p: Process, hidden: frozenset[str], counter: Iterator[int]) -> Process:
    """Binders viram ``#i`` em ordem de travessia; nomes em ``hidden`` viram ``?``."""
    mapping: dict[str, Arg] = {name: Var("?") for name in free_names(p) & hidden}
    return _alpha_walk(_subst(p, mapping) if mapping else p, counter)


def _alpha_walk(p: Process, counter: Iterator[int]) -> Process:
    match p:
        case New(name, body):
            fresh = f"#{next(counter)}"
            return New(fresh, _alpha_walk(_subst(body, {name: Var(fresh)}), counter))
        case Par(left, right):
            return Par(_alpha_walk(left, counter), _alpha_walk(right, counter))
        case If(cond, then, orelse):
            return If(cond, _alpha_walk(then, counter), _alpha_walk(orelse, counter))
        case GuardedProcess(branches):
            return GuardedProcess(tuple(_alpha_branch(b, counter) for b in branches))
    return p


def _alpha_branch(branch: Branch, counter: Iterator[int]) -> Branch:
    match branch:
        case Free(name, body):
            return Free(name, _alpha_walk(body, counter))
        case Receive(name, tag, params, body):
            renaming = {x.name: f"#{next(counter)}" for x in params}
            new_params = tuple(Param(renaming[x.name], x.type) for x in params)
            body = _subst(body, {k: Var(v) for k, v in renaming.items()})
            return Receive(name, tag, new_params, _alpha_walk(body, counter))
    return branch


def shape(p: Process, hidden: frozenset[str] = frozenset()) -> str:
    """Impressão invariante por alfa-renomeação (e cega para ``hidden``)."""
    return print_process(_alpha(p, hidden, itertools.count()))


def _temp_hidden(p: Process) -> frozenset[str]:
    return frozenset(n for n in free_names(p) if n.startswith(_TEMP))


def _occurrences(p: Process) -> Iterator[str]:
    """Nomes livres na ordem em que a impressão os visita."""
    match p:
        case Send(target, _, args):
            yield target
            for a in args:
                yield from sorted(arg_names(a))
        case Invoke(_, args):
            for a in args:
                yield from sorted(arg_names(a))
        case Par(left, right):
            yield from _occurrences(left)
            yield from _occurrences(right)
        case New(name, body):
            yield from (n for n in _occurrences(body) if n != name)
        case If(cond, then, orelse):
            yield from sorted(arg_names(cond.left) | arg_names(cond.right))
            yield from _occurrences(then)
            yield from _occurrences(orelse)
        case GuardedProcess(branches):
            for b in branches:
                yield b.name
                if isinstance(b, Free):
                    yield from _occurrences(b.body)
                elif isinstance(b, Receive):
                    bound = {x.name for x in b.params}
                    yield from (n for n in _occurrences(b.body) if n not in bound)


# ---------------------------------------------------------------------------
# Forma normal
# ---------------------------------------------------------------------------


class _Normalizer:
    def __init__(self, origins: Mapping[str, str]):
        self.origins = dict(origins)
        self.counter = itertools.count()

    def temp(self, original: str) -> str:
        name = f"{_TEMP}{next(self.counter)}"
        self.origins[name] = self.origins.get(original, original.rstrip("'"))
        return name

    def prenex(self, p: Process) -> tuple[list[str], list[Process]]:
        match p:
            case Done():
                return [], []
            case Par(left, right):
                b1, c1 = self.prenex(left)
                b2, c2 = self.prenex(right)
                return b1 + b2, c1 + c2
            case New(name, body):
                temp = self.temp(name)
                binders, components = self.prenex(_subst(body, {name: Var(temp)}))
                return [temp, *binders], components
        return [], [self.component(p)]

    def component(self, p: Process) -> Process:
        match p:
            case Send(_, _, args) | Invoke(_, args):
                return replace(p, args=tuple(evaluate(a) for a in args))
            case If(cond, then, orelse):
                cond = Cond(cond.op, evaluate(cond.left), evaluate(cond.right))
                return replace(p, cond=cond, then=self.inner(then), orelse=self.inner(orelse))
            case GuardedProcess(branches):
                return replace(p, branches=self.branches(branches))
        raise TypeError(f"componente inválido: {p!r}")

    def branches(self, branches: tuple[Branch, ...]) -> tuple[Branch, ...]:
        normalized: list[Branch] = []
        for b in branches:
            match b:
                case Free(_, body):
                    normalized.append(replace(b, body=self.inner(body)))
                case Receive(_, _, _, body):
                    normalized.append(replace(b, body=self.inner(body)))
                case _:
                    normalized.append(b)
        live = [b for b in normalized if not isinstance(b, Fail)]
        if not live:
            live = [min(normalized, key=lambda b: b.name)]
        return tuple(sorted(live, key=_branch_key))

    def inner(self, p: Process) -> Process:
        binders, components = self.prenex(p)
        return self.assemble(binders, components, positional=False)

    def assemble(
        self, binders: list[str], components: list[Process], positional: bool
    ) -> Process:
        bound = frozenset(binders)
        keyed = sorted(
            ((shape(c, bound | _temp_hidden(c)), c) for c in components),
            key=lambda pair: pair[0],
        )
        groups = [
            [c for _, c in group]
            for _, group in itertools.groupby(keyed, key=lambda pair: pair[0])
        ]
        order: list[str] = []
        for member in _arrange(groups, bound):
            _extend_order(order, member, bound)
        order.extend(sorted(b for b in binders if b not in order))

        if positional:
            renaming = {b: f"_{i}" for i, b in enumerate(order)}
        else:
            renaming = {}
            avoid = set().union(*(free_names(c) for c in components)) - bound
            for b in order:
                renaming[b] = fresh_name(self.origins[b], avoid)
                avoid.add(renaming[b])
        mapping = {k: Var(v) for k, v in renaming.items()}
        final = sorted((_resort(_subst(c, mapping)) for _, c in keyed), key=print_process)
        result = par_all(final)
        for b in reversed(order):
            result = New(renaming[b], result)
        if positional:
            self.origins = {renaming[b]: self.origins[b] for b in order}
        return result


def _branch_key(branch: Branch) -> str:
    lone = GuardedProcess((branch,))
    return shape(lone, _temp_hidden(lone))


def _extend_order(order: list[str], component: Process, bound: frozenset[str]) -> None:
    for name in _occurrences(component):
        if name in bound and name not in order:
            order.append(name)


def _arrange(groups: list[list[Process]], bound: frozenset[str]) -> list[Process]:
    """
    Ordem dos componentes que fixa a numeração dos nomes restritos.

    Componentes de mesma forma só se distinguem pelos nomes que
    compartilham com os demais grupos; por isso a ordem escolhida é a de
    menor impressão do conjunto inteiro, minimizando sobre as permutações
    de todos os grupos juntos. Acima de ``_MAX_PERMUTATIONS`` combinações
    cada grupo é ordenado em sequência, desempatando pela impressão dos
    grupos seguintes na ordem original.
    """
    joint = math.prod(math.factorial(len(g)) for g in groups)
    if joint <= _MAX_PERMUTATIONS:
        best = min(
            itertools.product(*(itertools.permutations(g) for g in groups)),
            key=lambda choice: _rendering(
                [c for perm in choice for c in perm], [], bound
            ),
        )
        return [c for perm in best for c in perm]

    arranged: list[Process] = []
    order: list[str] = []
    for index, members in enumerate(groups):
        later = [c for g in groups[index + 1 :] for c in g]
        if 1 < len(members) and math.factorial(len(members)) <= _MAX_PERMUTATIONS:
            members = list(
                min(
                    itertools.permutations(members),
                    key=lambda perm: (
                        _rendering(perm, order, bound),
                        _rendering([*perm, *later], order, bound),
                    ),
                )
            )
        for member in members:
            _extend_order(order, member, bound)
        arranged.extend(members)
    return arranged


def _rendering(
    perm: Sequence[Process], order: list[str], bound: frozenset[str]
) -> str:
    trial = list(order)
    for member in perm:
        _extend_order(trial, member, bound)
    mapping: dict[str, Arg] = {b: Var(f"_{i}") for i, b in enumerate(trial)}
    for member in perm:
        for name in _temp_hidden(member):
            mapping.setdefault(name, Var("?"))
    return " | ".join(print_process(_subst(c, mapping)) for c in perm)


def _resort(p: Process) -> Process:
    """Reordena ramos de guards pela impressão final."""
    match p:
        case GuardedProcess(branches):
            return replace(p, branches=tuple(sorted(branches, key=lambda b: print_process(GuardedProcess((b,))))))
    return p


def normal_form(
    p: Process, origins: Mapping[str, str] | None = None
) -> tuple[Process, dict[str, str]]:
    """
    Forma normal e mapa de origens dos nomes restritos de topo.

    ``origins`` informa o nome de fonte já conhecido para nomes de
    ``p``; o resultado mapeia cada ``_k`` ao binder de fonte de onde veio.
    """
    normalizer = _Normalizer(origins or {})
    binders, components = normalizer.prenex(p)
    result = normalizer.assemble(binders, components, positional=True)
    return result, normalizer.origins


def congruence_normal_form(p: Process) -> Process:
    """Representante canônico da classe de ≡ (axiomas listados)."""
    return normal_form(p)[0]


def canonical_key(p: Process) -> str:
    """Identidade de estado: impressão totalmente alfa-canônica da forma normal."""
    return shape(congruence_normal_form(p))


def nf_parts(p: Process) -> tuple[list[str], list[Process]]:
    """Binders de topo e componentes de um processo já normalizado."""
    binders: list[str] = []
    while isinstance(p, New):
        binders.append(p.name)
        p = p.body
    components: list[Process] = []
    stack = [p]
    while stack:
        node = stack.pop()
        if isinstance(node, Par):
            stack.extend([node.right, node.left])
        elif not isinstance(node, Done):
            components.append(node)
    return binders, components
