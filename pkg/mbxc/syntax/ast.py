"""
Árvore sintática do cálculo de mailboxes.

Processos, guards, argumentos inteiros, definições e programas. Todos os
nós são dataclasses imutáveis; a posição no fonte (``pos``) não participa
de igualdade nem de hash.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mbxc.depgraph import EMPTY, DepGraph
from mbxc.types.base import TypeExpr, TypeTable

Pos = tuple[int, int] | None
"""(linha, coluna) no fonte, quando conhecida."""


def _pos() -> Pos:
    return field(default=None, compare=False, repr=False)


# ---------------------------------------------------------------------------
# Expressões inteiras
# ---------------------------------------------------------------------------


class Arg:
    """Argumento de mensagem ou invocação: nome, literal ou expressão inteira."""


@dataclass(frozen=True)
class Var(Arg):
    name: str


@dataclass(frozen=True)
class IntLit(Arg):
    value: int


@dataclass(frozen=True)
class BinOp(Arg):
    op: str
    left: Arg
    right: Arg


@dataclass(frozen=True)
class Cond:
    """Comparação entre expressões inteiras."""

    op: str
    left: Arg
    right: Arg


COMPARISONS = {
    "<": int.__lt__,
    "<=": int.__le__,
    ">": int.__gt__,
    ">=": int.__ge__,
    "==": int.__eq__,
    "!=": int.__ne__,
}

ARITHMETIC = {"+": int.__add__, "-": int.__sub__}


# ---------------------------------------------------------------------------
# Processos
# ---------------------------------------------------------------------------


class Process:
    """Base dos nós de processo."""

    def __str__(self) -> str:
        from .printer import print_process

        return print_process(self)


@dataclass(frozen=True)
class Param:
    """Binder anotado ``x: T`` (recepção ou parâmetro de definição)."""

    name: str
    type: TypeExpr


@dataclass(frozen=True)
class Done(Process):
    pos: Pos = _pos()


@dataclass(frozen=True)
class Invoke(Process):
    name: str
    args: tuple[Arg, ...] = ()
    pos: Pos = _pos()


@dataclass(frozen=True)
class Send(Process):
    target: str
    tag: str
    args: tuple[Arg, ...] = ()
    pos: Pos = _pos()


@dataclass(frozen=True)
class Par(Process):
    left: Process
    right: Process
    pos: Pos = _pos()


@dataclass(frozen=True)
class New(Process):
    name: str
    body: Process
    pos: Pos = _pos()


@dataclass(frozen=True)
class If(Process):
    cond: Cond
    then: Process
    orelse: Process
    pos: Pos = _pos()


class Branch:
    """Ação de guard: ``fail``, ``free`` ou recepção."""

    name: str


@dataclass(frozen=True)
class Fail(Branch):
    name: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class Free(Branch):
    name: str
    body: Process
    pos: Pos = _pos()


@dataclass(frozen=True)
class Receive(Branch):
    name: str
    tag: str
    params: tuple[Param, ...]
    body: Process
    pos: Pos = _pos()


@dataclass(frozen=True)
class GuardedProcess(Process):
    branches: tuple[Branch, ...]
    pos: Pos = _pos()

    @property
    def mailboxes(self) -> tuple[str, ...]:
        """Mailboxes citadas, na ordem de primeira ocorrência."""
        return tuple(dict.fromkeys(b.name for b in self.branches))


DONE = Done()


def par_all(processes: list[Process]) -> Process:
    if not processes:
        return DONE
    result = processes[0]
    for p in processes[1:]:
        result = Par(result, p)
    return result


def par_components(p: Process) -> list[Process]:
    if isinstance(p, Par):
        return par_components(p.left) + par_components(p.right)
    return [p]


# ---------------------------------------------------------------------------
# Programas
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Definition:
    """``def X(x: T, ...) : [grafo] = P``."""

    name: str
    params: tuple[Param, ...]
    body: Process
    graph: DepGraph = EMPTY
    pos: Pos = _pos()

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)


@dataclass
class Program:
    types: TypeTable = field(default_factory=TypeTable)
    definitions: dict[str, Definition] = field(default_factory=dict)
    main: Process | None = None
    main_pos: Pos = None

    def __hash__(self) -> int:
        return id(self)

    def definition(self, name: str) -> Definition:
        from mbxc.errors import UnboundProcessError

        try:
            return self.definitions[name]
        except KeyError:
            raise UnboundProcessError(name)


SYSTEM = "system"
"""Nome livre reservado do console; aceita ``print_int(int)``."""

PRINT_TAG = "print_int"
