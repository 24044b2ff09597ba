"""
Verificação de programas inteiros, de estados de execução e de guards
mistos isolados.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Mapping

from mbxc.depgraph import acyclic, entails, find_cycle, to_text
from mbxc.errors import UndecidedError
from mbxc.patterns import Pattern, subpattern
from mbxc.patterns.base import atoms_of, holes_of
from mbxc.syntax.ast import (
    SYSTEM,
    Definition,
    Free,
    GuardedProcess,
    If,
    New,
    Par,
    Process,
    Program,
    Receive,
)
from mbxc.types import (
    MailboxType,
    Subtyping,
    TypeExpr,
    check_global_assumptions,
    is_reliable_env,
)

from .diagnostics import (
    CYCLE,
    GLOBAL_ASSUMPTION,
    GRAPH_ENTAILMENT,
    HOLES,
    IRRELEVANT_DROP_FAILED,
    NOT_CLOSED,
    SUBTYPE,
    SYSTEM_USAGE,
    UNDECIDED,
    UNRELIABLE_ENV,
    Diagnostic,
    Report,
    Verdict,
)
from .signatures import Signatures
from .synthesis import CONSOLE, Judgment, Synthesizer, synthesize
from .usage import Usage

logger = logging.getLogger(__name__)

MAIN = "main"


# ---------------------------------------------------------------------------
# Buracos de padrão
# ---------------------------------------------------------------------------


def _pattern_holes(pattern: Pattern) -> Iterator[str]:
    for hole in holes_of(pattern):
        yield hole.name
    for atom in atoms_of(pattern):
        for arg in atom.args:
            yield from type_holes(arg)


def type_holes(t: TypeExpr) -> Iterator[str]:
    """Nomes de buracos em ``t`` (sem desdobrar referências)."""
    if isinstance(t, MailboxType):
        yield from _pattern_holes(t.pattern)


def process_holes(p: Process) -> Iterator[str]:
    match p:
        case Par(left, right) | If(_, left, right):
            yield from process_holes(left)
            yield from process_holes(right)
        case New(_, body):
            yield from process_holes(body)
        case GuardedProcess(branches):
            for branch in branches:
                if isinstance(branch, Receive):
                    for x in branch.params:
                        yield from type_holes(x.type)
                if isinstance(branch, Free | Receive):
                    yield from process_holes(branch.body)


def program_holes(program: Program) -> list[str]:
    """Buracos de todo o programa, sem repetição, em ordem de ocorrência."""
    found: list[str] = []
    for t in program.types.definitions.values():
        found.extend(type_holes(t))
    for definition in program.definitions.values():
        for x in definition.params:
            found.extend(type_holes(x.type))
        found.extend(process_holes(definition.body))
    if program.main is not None:
        found.extend(process_holes(program.main))
    return list(dict.fromkeys(found))


# ---------------------------------------------------------------------------
# Verificação
# ---------------------------------------------------------------------------


def _render_env(env: Mapping[str, Usage], engine: Subtyping) -> dict[str, str]:
    rendered = {}
    for name, usage in env.items():
        t = usage.resolve(engine)
        rendered[name] = str(usage) if t is None else str(t)
    return rendered


def _console(env: dict[str, Usage], pos, engine: Subtyping) -> list[Diagnostic]:
    """Retira ``system`` do ambiente; só saídas ⊑ print_int(int)* são aceitas."""
    usage = env.pop(SYSTEM, None)
    if usage is None:
        return []
    if usage.is_int or usage.input is not None:
        return [Diagnostic(SYSTEM_USAGE, f"{SYSTEM} só pode receber mensagens", pos)]
    if not subpattern(usage.outputs, CONSOLE, engine.subtype):
        return [
            Diagnostic(
                SYSTEM_USAGE,
                f"{SYSTEM} recebe {usage.outputs}, mas só aceita {CONSOLE}",
                pos,
            )
        ]
    return []


def _closed(env: dict[str, Usage], pos, engine: Subtyping) -> list[Diagnostic]:
    problems = []
    for name, usage in sorted(env.items()):
        t = usage.resolve(engine)
        if t is None or not engine.is_irrelevant(t):
            problems.append(
                Diagnostic(NOT_CLOSED, f"{name} continua com a obrigação {usage}", pos)
            )
    return problems


def check_definition(
    definition: Definition, program: Program, engine: Subtyping, mixed_guards: bool = False
) -> Verdict:
    """Consistência de ``def X(x̄: T̄) : [φ] = P`` com a declaração."""
    logger.debug("🔍 verificando %s", definition.name)
    verdict = Verdict(definition.name, graph=to_text(definition.graph))
    declared = {x.name: x.type for x in definition.params}
    pos = definition.pos

    if not is_reliable_env(declared, engine):
        unreliable = [n for n, t in declared.items() if not engine.classify(t).reliable]
        verdict.diagnostics.append(
            Diagnostic(
                UNRELIABLE_ENV,
                f"parâmetros com tipo não confiável: {', '.join(unreliable)}",
                pos,
            )
        )
    if not acyclic(definition.graph):
        cycle = find_cycle(definition.graph) or []
        verdict.diagnostics.append(
            Diagnostic(
                CYCLE,
                "o grafo declarado tem ciclo",
                pos,
                witness=", ".join(f"{u}-{v}" for u, v in cycle),
            )
        )

    try:
        judgment, diagnostics = synthesize(
            definition.body, program, declared, mixed_guards, engine
        )
        verdict.diagnostics.extend(diagnostics)
        if judgment is None:
            return verdict
        env = dict(judgment.env)
        verdict.diagnostics.extend(_console(env, pos, engine))
        verdict.env = _render_env(env, engine)
        verdict.diagnostics.extend(_against_declaration(env, declared, pos, engine))
        if not entails(definition.graph, judgment.graph):
            verdict.diagnostics.append(
                Diagnostic(
                    GRAPH_ENTAILMENT,
                    f"o grafo declarado {to_text(definition.graph)} não implica "
                    f"o sintetizado {to_text(judgment.graph)}",
                    pos,
                )
            )
    except UndecidedError as exc:
        verdict.diagnostics.append(Diagnostic(UNDECIDED, str(exc), pos))
    return verdict


def _against_declaration(
    env: dict[str, Usage], declared: Mapping[str, TypeExpr], pos, engine: Subtyping
) -> list[Diagnostic]:
    problems = []
    for name, t in declared.items():
        usage = env.pop(name, None)
        if usage is None:
            if not engine.is_irrelevant(t):
                problems.append(
                    Diagnostic(
                        IRRELEVANT_DROP_FAILED,
                        f"{name}: {t} é relevante e não é usado",
                        pos,
                    )
                )
            continue
        actual = usage.resolve(engine)
        if actual is None:
            problems.append(
                Diagnostic(SUBTYPE, f"{name}: {usage} não se resolve contra {t}", pos)
            )
        elif not engine.subtype(t, actual):
            problems.append(
                Diagnostic(SUBTYPE, f"{name}: declarado {t}, mas usado como {actual}", pos)
            )
    problems.extend(_closed(env, pos, engine))
    return problems


def _check_closed(
    name: str, p: Process, program: Program, engine: Subtyping, mixed_guards: bool, pos
) -> Verdict:
    verdict = Verdict(name)
    try:
        judgment, diagnostics = synthesize(p, program, None, mixed_guards, engine)
        verdict.diagnostics.extend(diagnostics)
        if judgment is None:
            return verdict
        env = dict(judgment.env)
        verdict.graph = to_text(judgment.graph)
        verdict.diagnostics.extend(_console(env, pos, engine))
        verdict.env = _render_env(env, engine)
        verdict.diagnostics.extend(_closed(env, pos, engine))
    except UndecidedError as exc:
        verdict.diagnostics.append(Diagnostic(UNDECIDED, str(exc), pos))
    return verdict


def _global_assumptions(program: Program) -> tuple[list[Diagnostic], bool]:
    extra = [
        (f"def {d.name}({x.name})", x.type, d.pos)
        for d in program.definitions.values()
        for x in d.params
    ]
    problems = check_global_assumptions(program.types, extra)
    fatal = any("contrativo" in p.problem for p in problems)
    return [Diagnostic(GLOBAL_ASSUMPTION, str(p), p.pos) for p in problems], fatal


def check_program(program: Program, mixed_guards: bool = False) -> Report:
    """Verifica cada definição contra a declaração e ``main`` contra ∅."""
    report = Report(mixed_guards=mixed_guards)
    holes = program_holes(program)
    if holes:
        report.diagnostics.append(
            Diagnostic(
                HOLES,
                f"o programa tem padrões a inferir ({', '.join(holes)}); "
                "use 'mbxc constraints'",
            )
        )
        return report
    problems, fatal = _global_assumptions(program)
    report.diagnostics.extend(problems)
    if fatal:
        return report

    engine = Subtyping(program.types)
    for definition in program.definitions.values():
        report.definitions.append(check_definition(definition, program, engine, mixed_guards))
    if program.main is not None:
        report.definitions.append(
            _check_closed(MAIN, program.main, program, engine, mixed_guards, program.main_pos)
        )
    if report.ok:
        logger.info("✅ programa bem tipado (%d definições)", len(program.definitions))
    else:
        logger.info("⚠️ %d diagnóstico(s)", len(report.all_diagnostics))
    return report


def check_process(p: Process, program: Program, mixed_guards: bool = False) -> Verdict:
    """Tipa um estado fechado de execução contra o ambiente vazio."""
    return _check_closed("state", p, program, Subtyping(program.types), mixed_guards, None)


def check_guard_mixed(
    guard: GuardedProcess,
    program: Program,
    declared: Mapping[str, TypeExpr] | None = None,
) -> Verdict:
    """Aplica as regras de guard misto a um guard isolado."""
    engine = Subtyping(program.types)
    signatures = Signatures.collect(guard, program, declared)
    synthesizer = Synthesizer(program, engine, signatures, mixed_guards=True)
    verdict = Verdict("guard")
    try:
        judgment: Judgment | None = synthesizer.guard(guard)
    except UndecidedError as exc:
        verdict.diagnostics.append(Diagnostic(UNDECIDED, str(exc), guard.pos))
        return verdict
    verdict.diagnostics.extend(synthesizer.diagnostics)
    if judgment is not None:
        verdict.env = _render_env(judgment.env, engine)
        verdict.graph = to_text(judgment.graph)
        if declared:
            env = dict(judgment.env)
            for name, t in declared.items():
                usage = env.get(name)
                actual = None if usage is None else usage.resolve(engine)
                if actual is not None and not engine.subtype(t, actual):
                    verdict.diagnostics.append(
                        Diagnostic(
                            SUBTYPE,
                            f"{name}: declarado {t}, mas o guard exige {actual}",
                            guard.pos,
                        )
                    )
    return verdict


__all__ = [
    "MAIN",
    "check_definition",
    "check_program",
    "check_process",
    "check_guard_mixed",
    "program_holes",
    "type_holes",
    "process_holes",
]
