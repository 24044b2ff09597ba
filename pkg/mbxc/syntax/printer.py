"""
Impressão canônica de processos e programas.

A saída é estável para a mesma árvore e é relida pelo parser (nomes de
execução como ``_0`` são a exceção: só aparecem em estados).
"""

from __future__ import annotations

from mbxc.depgraph import Empty, to_text

from .ast import (
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
    IntLit,
    Invoke,
    New,
    Par,
    Param,
    Process,
    Program,
    Receive,
    Send,
    Var,
)

# Precedências
_PAR, _SUM, _PREFIX = 1, 2, 3


def print_arg(arg: Arg, nested: bool = False) -> str:
    match arg:
        case Var(name):
            return name
        case IntLit(value):
            if value < 0:
                return f"(0 - {-value})"
            return str(value)
        case BinOp(op, left, right):
            text = f"{print_arg(left)} {op} {print_arg(right, nested=True)}"
            return f"({text})" if nested else text
    raise TypeError(f"argumento inválido: {arg!r}")


def _args(args: tuple[Arg, ...]) -> str:
    return ", ".join(print_arg(a) for a in args)


def _params(params: tuple[Param, ...]) -> str:
    return ", ".join(f"{p.name}: {p.type}" for p in params)


def print_cond(cond: Cond) -> str:
    return f"{print_arg(cond.left)} {cond.op} {print_arg(cond.right)}"


def print_branch(branch: Branch) -> str:
    match branch:
        case Fail(name):
            return f"fail {name}"
        case Free(name, body):
            return f"free {name}.{_process(body, _PREFIX)}"
        case Receive(name, tag, params, body):
            return f"{name}?{tag}({_params(params)}).{_process(body, _PREFIX)}"
    raise TypeError(f"ramo inválido: {branch!r}")


def _process(p: Process, context: int) -> str:
    match p:
        case Done():
            return "done"
        case Send(target, tag, args):
            return f"{target}!{tag}({_args(args)})"
        case Invoke(name, args):
            return f"{name}({_args(args)})"
        case Par(left, right):
            text = f"{_process(left, _PAR)} | {_process(right, _SUM)}"
            return f"({text})" if context > _PAR else text
        case New(name, body):
            return f"new {name} in {_process(body, _PREFIX)}"
        case If(cond, then, orelse):
            return (
                f"if {print_cond(cond)} then {_process(then, _PREFIX)} "
                f"else {_process(orelse, _PREFIX)}"
            )
        case GuardedProcess(branches):
            text = " + ".join(print_branch(b) for b in branches)
            return f"({text})" if context > _SUM and len(branches) > 1 else text
    raise TypeError(f"processo inválido: {p!r}")


def print_process(p: Process) -> str:
    return _process(p, 0)


def print_definition(definition: Definition) -> str:
    head = f"def {definition.name}({_params(definition.params)})"
    if not isinstance(definition.graph, Empty):
        head += f" : [{to_text(definition.graph)}]"
    return f"{head} =\n    {print_process(definition.body)}"


def print_program(program: Program) -> str:
    blocks = [f"type {name} = {t}" for name, t in program.types.items()]
    blocks.extend(print_definition(d) for d in program.definitions.values())
    if program.main is not None:
        blocks.append(f"main =\n    {print_process(program.main)}")
    return "\n\n".join(blocks) + "\n"
