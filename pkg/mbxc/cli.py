"""
mbxc - checker, interpretador e ferramentas do cálculo de mailboxes.

Uso:
    mbxc <comando> [argumentos]

Comandos disponíveis:
    check FILE [--mixed-guards] [--session ST] [--json]
        Verifica as definições e o main contra as declarações

    run FILE [--seed S] [--max-steps K] [--session ST] [--json]
        Executa um traço pseudoaleatório reprodutível

    explore FILE [--max-states N] [--max-depth D] [--bound MAILBOX] [--json]
        Explora todos os estados alcançáveis e classifica o grafo

    pat include|equiv E F  /  pat residual E m  /  pat nf E
        Consultas sobre padrões (. produto, + soma, * estrela, 0, 1)

    ty sub T S  /  ty classify T
        Subtipagem e classificação de tipos de mailbox

    encode-session FILE.st [-o OUT.mbx]
        Gera os tipos T/coT e as definições Session_T de uma sessão

    constraints FILE [--solution JSON] [--json]
        Gera as restrições de inferência de padrões (buracos _nome)

    fmt FILE [--check]
        Reimprime o programa na forma canônica

Exemplos:
    mbxc check mbxc/corpus/lock.mbx
    mbxc check mbxc/corpus/readers_writer.mbx --mixed-guards
    mbxc explore mbxc/corpus/account_deadlock.mbx --json
    mbxc pat include "A*" "A.A*"
    mbxc ty sub "?A" "?(A + B)"
    mbxc encode-session mbxc/corpus/session.st -o session_gen.mbx

Exit codes:
    0 - Sucesso
    1 - Resultado negativo (erro de tipo, deadlock ou fail, inclusão falsa)
    2 - Erro de argumentos, de leitura ou de sintaxe
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from mbxc.checker import check_program, check_solution, generate_constraints
from mbxc.config import LOG_LEVEL, MAX_DEPTH, MAX_STATES, MAX_STEPS
from mbxc.encodings import generate_session_process, parse_session
from mbxc.errors import MbxcError
from mbxc.patterns import (
    Atom,
    normal_form_violation,
    pattern_equiv,
    residual,
    subpattern,
)
from mbxc.runtime import explore, mailbox_bounds, run
from mbxc.syntax import parse, parse_pattern, parse_type, print_process, print_program
from mbxc.syntax.ast import Program
from mbxc.types import Subtyping, TypeTable

logger = logging.getLogger(__name__)

_GREEN = "\033[32m"
_RED = "\033[31m"
_RESET = "\033[0m"


class _Output:
    def __init__(self, color: bool):
        self.color = color

    def verdict(self, ok: bool, text: str) -> None:
        line = f"{'✅' if ok else '❌'} {text}"
        if self.color:
            line = f"{_GREEN if ok else _RED}{line}{_RESET}"
        print(line)

    @staticmethod
    def problem(text: str) -> None:
        print(f"   {text}", file=sys.stderr)

    @staticmethod
    def json(data) -> None:
        print(json.dumps(data, ensure_ascii=False, indent=2))


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(path: str, session: str | None = None) -> Program:
    prelude = None
    if session:
        prelude = generate_session_process(parse_session(_read(session)))
    return parse(_read(path), prelude=prelude)


def _table(path: str | None) -> TypeTable:
    return TypeTable() if path is None else parse(_read(path)).types


# ---------------------------------------------------------------------------
# Comandos
# ---------------------------------------------------------------------------


def cmd_check(args, out: _Output) -> int:
    program = _load(args.file, args.session)
    report = check_program(program, mixed_guards=args.mixed_guards)
    if args.json:
        out.json(report.to_dict())
        return 0 if report.ok else 1

    for diagnostic in report.diagnostics:
        out.problem(str(diagnostic))
    for verdict in report.definitions:
        out.verdict(verdict.ok, f"{verdict.name}  {verdict.graph}")
        for diagnostic in verdict.diagnostics:
            out.problem(str(diagnostic))
    total = len(report.all_diagnostics)
    out.verdict(report.ok, "bem tipado" if report.ok else f"{total} diagnóstico(s)")
    return 0 if report.ok else 1


def cmd_run(args, out: _Output) -> int:
    program = _load(args.file, args.session)
    trace = run(program, seed=args.seed, max_steps=args.max_steps)
    if args.json:
        out.json(trace.to_dict())
    else:
        print(f"🔍 seed={trace.seed}")
        for i, step in enumerate(trace.steps, start=1):
            printed = "" if step.printed is None else f"  ⇒ {step.printed}"
            print(f"{i:4d}. [{step.rule}] {step.redex}{printed}")
        if trace.outputs:
            print(f"🖨️  {' '.join(str(v) for v in trace.outputs)}")
        if trace.truncated:
            print(f"⚠️  truncado após {len(trace)} passos")
        else:
            out.verdict(trace.ends_in_done, f"estado final: {print_process(trace.final)}")
    return 0 if trace.truncated or trace.ends_in_done else 1


def cmd_explore(args, out: _Output) -> int:
    program = _load(args.file, args.session)
    graph = explore(program, max_states=args.max_states, max_depth=args.max_depth)
    bounds = [mailbox_bounds(program, graph, name) for name in args.bound or []]
    negative = graph.mailbox_conformant is False or graph.deadlock_free is False

    if args.json:
        data = graph.to_dict()
        data["bounds"] = [b.to_dict() for b in bounds]
        out.json(data)
        return 1 if negative else 0

    print(f"📊 {len(graph.states)} estados, {graph.edge_count} arestas")
    if graph.truncated:
        print("⚠️  exploração truncada: as propriedades abaixo são parciais")
    labels = {
        "conformidade de mailbox": graph.mailbox_conformant,
        "ausência de deadlock": graph.deadlock_free,
        "terminação justa": graph.fairly_terminating,
        "desdobramento finito": graph.finitely_unfolding,
    }
    for label, value in labels.items():
        if value is None:
            print(f"❔ {label}: indeterminado")
        else:
            out.verdict(value, label)
    if graph.fail_witness:
        out.problem("fail exposto após: " + " → ".join(graph.fail_witness))
    for key in sorted(graph.deadlocks)[:5]:
        out.problem(f"deadlock: {key}")
    for b in bounds:
        ranges = ", ".join(f"{tag}: {lo}..{hi}" for tag, (lo, hi) in sorted(b.bounds.items()))
        suffix = "" if b.exact else " (estimativa)"
        print(f"📬 {b.mailbox}: {ranges or 'sempre vazia'}{suffix}")
    return 1 if negative else 0


def cmd_pat(args, out: _Output) -> int:
    engine = Subtyping(_table(args.types))
    e = parse_pattern(args.left)
    if args.op == "nf":
        problem = normal_form_violation(e, engine.subtype)
        out.verdict(problem is None, f"{e} {'está' if problem is None else 'não está'} em forma normal")
        if problem:
            out.problem(problem)
        return 0 if problem is None else 1
    if args.right is None:
        raise MbxcError(f"pat {args.op} exige dois argumentos")

    if args.op == "residual":
        m = parse_pattern(args.right)
        if not isinstance(m, Atom):
            raise MbxcError(f"'{args.right}' não é uma mensagem")
        result = residual(e, m, engine.subtype)
        if result is None:
            out.verdict(False, f"{e} / {m} indefinido")
            return 1
        print(result)
        return 0

    f = parse_pattern(args.right)
    if args.op == "equiv":
        holds = pattern_equiv(e, f, engine.subtype)
        out.verdict(holds, f"{e} {'≂' if holds else '≄'} {f}")
        return 0 if holds else 1
    result = subpattern(e, f, engine.subtype)
    out.verdict(result.holds, f"{e} {'⊑' if result else '⋢'} {f}")
    if not result:
        print(f"testemunha: {result.witness}")
    return 0 if result else 1


def cmd_ty(args, out: _Output) -> int:
    engine = Subtyping(_table(args.types))
    t = parse_type(args.left)
    if args.op == "classify":
        classification = engine.classify(t)
        if args.json:
            out.json(classification.to_dict())
        else:
            for name, value in classification.to_dict().items():
                print(f"{name}: {'sim' if value else 'não'}")
        return 0
    if args.right is None:
        raise MbxcError("ty sub exige dois tipos")
    s = parse_type(args.right)
    holds = engine.subtype(t, s)
    out.verdict(holds, f"{t} {'≤' if holds else '≰'} {s}")
    return 0 if holds else 1


def cmd_encode_session(args, out: _Output) -> int:
    program = generate_session_process(parse_session(_read(args.file)))
    text = print_program(program)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        out.verdict(True, f"{len(program.definitions)} definições em {args.output}")
    else:
        print(text, end="")
    return 0


def cmd_constraints(args, out: _Output) -> int:
    constraints = generate_constraints(_load(args.file, args.session))
    if args.solution is None:
        if args.json:
            out.json(
                {
                    "holes": list(constraints.holes),
                    "constraints": constraints.lines(),
                    "by_rule": dict(sorted(constraints.by_rule().items())),
                }
            )
        else:
            for line in constraints.lines():
                print(line)
            print(f"📊 {len(constraints)} restrições, buracos: {', '.join(constraints.holes) or '-'}")
        return 0

    raw = json.loads(_read(args.solution))
    assignment = {hole: parse_pattern(text) for hole, text in raw.items()}
    failures = check_solution(constraints, assignment)
    for failure in failures:
        out.problem(failure)
    out.verdict(not failures, "solução satisfaz as restrições" if not failures else f"{len(failures)} restrição(ões) violada(s)")
    return 0 if not failures else 1


def cmd_fmt(args, out: _Output) -> int:
    source = _read(args.file)
    formatted = print_program(parse(source))
    if args.check:
        same = formatted == source
        out.verdict(same, f"{args.file} {'já está' if same else 'não está'} formatado")
        return 0 if same else 1
    print(formatted, end="")
    return 0


# ---------------------------------------------------------------------------
# Parser de argumentos
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mbxc",
        description="Checker e interpretador do cálculo de mailboxes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument("--color", action="store_true", help="Colorir os vereditos")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Verifica tipos")
    check.add_argument("file")
    check.add_argument("--mixed-guards", action="store_true", help="Regras relaxadas de guards mistos")
    check.add_argument("--session", help="Arquivo .st cujas definições são incluídas")
    check.add_argument("--json", action="store_true")
    check.set_defaults(handler=cmd_check)

    run_ = commands.add_parser("run", help="Executa um traço")
    run_.add_argument("file")
    run_.add_argument("--seed", type=int, default=0)
    run_.add_argument("--max-steps", type=int, default=MAX_STEPS)
    run_.add_argument("--session")
    run_.add_argument("--json", action="store_true")
    run_.set_defaults(handler=cmd_run)

    explore_ = commands.add_parser("explore", help="Explora o espaço de estados")
    explore_.add_argument("file")
    explore_.add_argument("--max-states", type=int, default=MAX_STATES)
    explore_.add_argument("--max-depth", type=int, default=MAX_DEPTH)
    explore_.add_argument("--bound", action="append", metavar="MAILBOX", help="Limites de mensagens por tag")
    explore_.add_argument("--session")
    explore_.add_argument("--json", action="store_true")
    explore_.set_defaults(handler=cmd_explore)

    pat = commands.add_parser("pat", help="Consultas sobre padrões")
    pat.add_argument("op", choices=["include", "equiv", "residual", "nf"])
    pat.add_argument("left")
    pat.add_argument("right", nargs="?")
    pat.add_argument("--types", help="Programa .mbx com os tipos nomeados")
    pat.set_defaults(handler=cmd_pat)

    ty = commands.add_parser("ty", help="Consultas sobre tipos")
    ty.add_argument("op", choices=["sub", "classify"])
    ty.add_argument("left")
    ty.add_argument("right", nargs="?")
    ty.add_argument("--types", help="Programa .mbx com os tipos nomeados")
    ty.add_argument("--json", action="store_true")
    ty.set_defaults(handler=cmd_ty)

    encode = commands.add_parser("encode-session", help="Codifica uma sessão binária")
    encode.add_argument("file")
    encode.add_argument("-o", "--output")
    encode.set_defaults(handler=cmd_encode_session)

    constraints = commands.add_parser("constraints", help="Gera restrições de inferência")
    constraints.add_argument("file")
    constraints.add_argument("--solution", help="JSON buraco → padrão a verificar")
    constraints.add_argument("--session")
    constraints.add_argument("--json", action="store_true")
    constraints.set_defaults(handler=cmd_constraints)

    fmt = commands.add_parser("fmt", help="Formata um programa")
    fmt.add_argument("file")
    fmt.add_argument("--check", action="store_true")
    fmt.set_defaults(handler=cmd_fmt)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Função principal do CLI."""
    logging.basicConfig(level=LOG_LEVEL, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2

    out = _Output(args.color)
    try:
        return args.handler(args, out)
    except (MbxcError, OSError, ValueError) as exc:
        print(f"❌ ERRO: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        print("\n\n⚠️  Interrompido pelo usuário", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
