"""
Síntese bottom-up de ambientes de uso e grafos de dependência.

Cada regra produz um ``Judgment`` (ambiente de usos adiados + grafo) ou
None, registrando diagnósticos. Guards não produzem grafo próprio: o
grafo do processo guardado liga as mailboxes guardadas ao resto do
ambiente. Nomes inteiros não geram dependências; o console ``system``
também não.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field

from mbxc.depgraph import (
    EMPTY,
    DepGraph,
    acyclic,
    edges_from,
    entails,
    find_cycle,
    restrict,
    substitute_graph,
    union,
)
from mbxc.patterns import ONE, ZERO, Atom, Pattern, Product, Star, Sum, WorkMeter, psum, subpattern
from mbxc.patterns.residual import normal_form_violation, residual
from mbxc.syntax.ast import (
    PRINT_TAG,
    SYSTEM,
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
from mbxc.syntax.congruence import arg_names
from mbxc.syntax.scope import did_you_mean
from mbxc.types import INT, TOP_OUTPUT, IntType, MailboxType, Subtyping, TypeExpr, out
from mbxc.types.base import NonContractiveError

from .diagnostics import (
    ARGUMENT,
    ARITY,
    BRANCH_MISMATCH,
    COMBINATION_UNDEFINED,
    COMBINATION_UNRESOLVED,
    CYCLE,
    INPUT_MISSING,
    IRRELEVANT_DROP_FAILED,
    MIXED_GUARD,
    NEW_UNBALANCED,
    NF_VIOLATION,
    SUBTYPE,
    SYSTEM_USAGE,
    UNKNOWN_SIGNATURE,
    Diagnostic,
)
from .signatures import Signatures
from .usage import INT_USAGE, Usage, UsageEnv, par_envs

logger = logging.getLogger(__name__)

PRINT_ATOM = Atom(PRINT_TAG, (INT,))
CONSOLE = Star(PRINT_ATOM)


@dataclass
class Judgment:
    """⊢ P ▹ Γ; φ com usos adiados."""

    env: UsageEnv = field(default_factory=dict)
    graph: DepGraph = EMPTY
    absorbing: bool = False
    """Verdadeiro para continuações que só falham (t-fail aceita qualquer ambiente)."""


def _cycle_text(edges: list[tuple[str, str]]) -> str:
    return ", ".join(f"{u}-{v}" for u, v in edges)


class Synthesizer:
    def __init__(
        self,
        program: Program,
        engine: Subtyping,
        signatures: Signatures,
        mixed_guards: bool = False,
        meter: WorkMeter | None = None,
    ):
        self.program = program
        self.engine = engine
        self.signatures = signatures
        self.mixed_guards = mixed_guards
        self.meter = meter or WorkMeter()
        self.diagnostics: list[Diagnostic] = []

    # Utilidades

    def report(self, code: str, message: str, pos: Pos, witness: str | None = None) -> None:
        self.diagnostics.append(Diagnostic(code, message, pos, witness))

    def rel(self, t: TypeExpr, s: TypeExpr) -> bool:
        return self.engine.subtype(t, s)

    def add(self, env: UsageEnv, name: str, usage: Usage, pos: Pos) -> bool:
        if name not in env:
            env[name] = usage
            return True
        combined = env[name].par(usage)
        if combined is None:
            self.report(
                COMBINATION_UNDEFINED,
                f"{name}: combinação indefinida de {env[name]} com {usage}",
                pos,
            )
            return False
        env[name] = combined
        return True

    def well_formed(self, graph: DepGraph, pos: Pos) -> bool:
        if acyclic(graph):
            return True
        cycle = find_cycle(graph) or []
        self.report(
            CYCLE,
            "dependência circular entre mailboxes",
            pos,
            witness=_cycle_text(cycle),
        )
        return False

    @staticmethod
    def dependents(env: UsageEnv) -> list[str]:
        return [n for n, u in env.items() if not u.is_int and n != SYSTEM]

    def ints(self, env: UsageEnv, names, pos: Pos) -> bool:
        return all([self.add(env, name, INT_USAGE, pos) for name in sorted(names)])

    # Processos

    def process(self, p: Process) -> Judgment | None:
        match p:
            case Done():
                return Judgment()
            case Send():
                return self.send(p)
            case Invoke():
                return self.invoke(p)
            case Par():
                return self.par(p)
            case New():
                return self.new(p)
            case If():
                return self.conditional(p)
            case GuardedProcess():
                return self.guard(p)
        raise TypeError(f"processo inválido: {p!r}")

    def send(self, p: Send) -> Judgment | None:
        logger.debug("🔍 t-msg %s!%s", p.target, p.tag)
        if p.target == SYSTEM:
            return self.console(p)
        atom = self.signatures.lookup(p.target, p.tag, len(p.args))
        if atom is None:
            known = self.signatures.known(p.target)
            suggestion = did_you_mean(f"{p.tag}/{len(p.args)}", known)
            hint = f" (você quis dizer '{suggestion}'?)" if suggestion else ""
            self.report(
                UNKNOWN_SIGNATURE,
                f"nenhum tipo conhecido para {p.target}!{p.tag}/{len(p.args)}{hint}",
                p.pos,
                witness=", ".join(known) or None,
            )
            return None
        env: UsageEnv = {p.target: Usage(atom)}
        carried: list[str] = []
        ok = True
        for arg, t in zip(p.args, atom.args, strict=True):
            resolved = self.engine.resolve(t)
            if isinstance(resolved, IntType):
                ok = self.ints(env, arg_names(arg), p.pos) and ok
            elif isinstance(arg, Var):
                ok = self.add(env, arg.name, Usage.of_type(resolved), p.pos) and ok
                if arg.name != SYSTEM:
                    carried.append(arg.name)
            else:
                self.report(ARGUMENT, f"expressão inteira onde se espera {t}", p.pos)
                ok = False
        graph = edges_from(p.target, carried)
        if not ok or not self.well_formed(graph, p.pos):
            return None
        return Judgment(env, graph)

    def console(self, p: Send) -> Judgment | None:
        if p.tag != PRINT_TAG or len(p.args) != 1:
            self.report(
                SYSTEM_USAGE,
                f"{SYSTEM} só aceita {PRINT_TAG}(int), não {p.tag}/{len(p.args)}",
                p.pos,
            )
            return None
        env: UsageEnv = {SYSTEM: Usage(PRINT_ATOM)}
        if not self.ints(env, arg_names(p.args[0]), p.pos):
            return None
        return Judgment(env)

    def invoke(self, p: Invoke) -> Judgment | None:
        logger.debug("🔍 t-def %s", p.name)
        definition = self.program.definitions.get(p.name)
        if definition is None or len(definition.params) != len(p.args):
            expected = "?" if definition is None else len(definition.params)
            self.report(
                ARITY,
                f"{p.name} espera {expected} argumento(s), recebeu {len(p.args)}",
                p.pos,
            )
            return None
        env: UsageEnv = {}
        mapping: dict[str, str] = {}
        ok = True
        for param, arg in zip(definition.params, p.args, strict=True):
            resolved = self.engine.resolve(param.type)
            if isinstance(resolved, IntType):
                ok = self.ints(env, arg_names(arg), p.pos) and ok
            elif isinstance(arg, Var):
                ok = self.add(env, arg.name, Usage.of_type(resolved), p.pos) and ok
                mapping[param.name] = arg.name
            else:
                self.report(
                    ARGUMENT,
                    f"{p.name}: expressão inteira no parâmetro {param.name}: {param.type}",
                    p.pos,
                )
                ok = False
        graph = substitute_graph(definition.graph, mapping)
        if not ok or not self.well_formed(graph, p.pos):
            return None
        return Judgment(env, graph)

    def par(self, p: Par) -> Judgment | None:
        left, right = self.process(p.left), self.process(p.right)
        if left is None or right is None:
            return None
        logger.debug("🔍 t-par %s", p.pos)
        env, clashes = par_envs(left.env, right.env)
        for name in clashes:
            self.report(
                COMBINATION_UNDEFINED,
                f"{name}: combinação indefinida de {left.env[name]} com {right.env[name]}",
                p.pos,
            )
        graph = union(left.graph, right.graph)
        if clashes or not self.well_formed(graph, p.pos):
            return None
        return Judgment(env, graph)

    def new(self, p: New) -> Judgment | None:
        body = self.process(p.body)
        if body is None:
            return None
        logger.debug("🔍 t-new %s", p.name)
        env = dict(body.env)
        usage = env.pop(p.name, None)
        graph = restrict(p.name, body.graph)
        if usage is None:
            if body.absorbing:
                return Judgment(env, graph, absorbing=True)
            self.report(NEW_UNBALANCED, f"a mailbox {p.name} não é usada no seu escopo", p.pos)
            return None
        if usage.is_int:
            self.report(ARGUMENT, f"{p.name} é uma mailbox, mas é usada como inteiro", p.pos)
            return None
        if usage.input is None:
            self.report(
                NEW_UNBALANCED,
                f"mensagens guardadas em {p.name} ({usage.outputs}) nunca são consumidas",
                p.pos,
            )
            return None
        included = subpattern(usage.outputs, usage.input, self.rel, self.meter)
        if not included:
            self.report(
                NEW_UNBALANCED,
                f"{p.name} recebe {usage.outputs}, mas o guard só trata {usage.input}",
                p.pos,
                witness=str(included.witness),
            )
            return None
        return Judgment(env, graph, body.absorbing)

    def conditional(self, p: If) -> Judgment | None:
        then, orelse = self.process(p.then), self.process(p.orelse)
        if then is None or orelse is None:
            return None
        logger.debug("🔍 t-if %s", p.pos)
        if then.absorbing and not orelse.absorbing:
            env, graph = dict(orelse.env), orelse.graph
        elif orelse.absorbing and not then.absorbing:
            env, graph = dict(then.env), then.graph
        else:
            reconciled = self.reconcile([then.env, orelse.env], p.pos, "if")
            if reconciled is None:
                return None
            env = reconciled
            if entails(then.graph, orelse.graph):
                graph = then.graph
            elif entails(orelse.graph, then.graph):
                graph = orelse.graph
            else:
                graph = union(then.graph, orelse.graph)
        names = arg_names(p.cond.left) | arg_names(p.cond.right)
        if not self.ints(env, names, p.pos) or not self.well_formed(graph, p.pos):
            return None
        return Judgment(env, graph, then.absorbing and orelse.absorbing)

    # Guards

    def guard(self, g: GuardedProcess) -> Judgment | None:
        guarded = g.mailboxes
        if len(guarded) > 1 and not self.mixed_guards:
            self.report(
                MIXED_GUARD,
                f"os ramos se referem a mailboxes diferentes ({', '.join(guarded)}); "
                "use o modo de guards mistos",
                g.pos,
            )
            return None
        logger.debug("🔍 t-guard %s", ", ".join(guarded))

        patterns: dict[str, list[Pattern]] = {v: [] for v in guarded}
        shapes: dict[str, list[tuple[Atom | None, Pattern]]] = {v: [] for v in guarded}
        residuals: list[tuple[str, UsageEnv]] = []
        ok = True
        for branch in g.branches:
            match branch:
                case Fail(u):
                    patterns[u].append(ZERO)
                case Free(u, body):
                    j = self.process(body)
                    if j is None:
                        ok = False
                        continue
                    patterns[u].append(ONE)
                    shapes[u].append((None, ONE))
                    rest = dict(j.env)
                    leftover = rest.pop(u, None)
                    if leftover is not None and not self.irrelevant(leftover):
                        self.report(
                            SUBTYPE,
                            f"{u} continua em uso ({leftover}) depois de free {u}",
                            branch.pos,
                        )
                        ok = False
                    if not j.absorbing:
                        residuals.append((u, rest))
                case Receive(u, tag, params, body):
                    j = self.process(body)
                    if j is None:
                        ok = False
                        continue
                    rest = dict(j.env)
                    for x in params:
                        ok = self.binder(x, rest.pop(x.name, None), j.absorbing, branch.pos) and ok
                    continuation = self.continuation(u, rest.pop(u, None), j.absorbing, branch.pos)
                    if continuation is None:
                        ok = False
                        continue
                    atom = Atom(tag, tuple(x.type for x in params))
                    patterns[u].append(atom if continuation == ONE else Product(atom, continuation))
                    shapes[u].append((atom, continuation))
                    if not j.absorbing:
                        residuals.append((u, rest))
        if not ok:
            return None

        obligations: dict[str, Pattern] = {}
        for v in guarded:
            branch_sum = psum(patterns[v])
            violation = normal_form_violation(branch_sum, self.rel)
            if violation is not None:
                narrowed = self.narrowed(shapes[v])
                if narrowed is not None:
                    logger.debug("🔧 %s: %s estreitado para %s", v, branch_sum, narrowed)
                    branch_sum, violation = narrowed, None
            if violation is not None:
                self.report(
                    NF_VIOLATION,
                    f"o padrão {branch_sum} de {v} não está em forma normal",
                    g.pos,
                    witness=violation,
                )
                ok = False
            carried = self.carried(v, residuals, g.pos)
            if carried is None:
                ok = False
                continue
            total = branch_sum if not carried else Sum(branch_sum, carried[0])
            for other in carried:
                if not subpattern(total, other, self.rel, self.meter):
                    self.report(
                        SUBTYPE,
                        f"{v}: ?{total} não é subtipo de ?{other} exigido por outro ramo",
                        g.pos,
                    )
                    ok = False
            obligations[v] = total
        if not ok:
            return None

        if residuals:
            gamma = self.reconcile([rest for _, rest in residuals], g.pos, "guard")
            if gamma is None:
                return None
        else:
            gamma = {}
        env = dict(gamma)
        for v, total in obligations.items():
            env[v] = Usage(ONE, total)
        others = self.dependents(gamma)
        graph = union(*(edges_from(v, others) for v in guarded))
        if not self.well_formed(graph, g.pos):
            return None
        return Judgment(env, graph, absorbing=not residuals)

    def narrowed(self, shapes: list[tuple[Atom | None, Pattern]]) -> Pattern | None:
        """
        Soma em forma normal obtida estreitando as continuações (t-sub).

        Para um candidato C, o ramo ``v?m.P`` passa a contribuir ``m·(C/m)``,
        o que só é permitido quando ``C/m ⊑ X`` (X é o padrão sintetizado
        para v em P); ``free v`` contribui 𝟙. Candidatos são os padrões das
        continuações e as entradas declaradas com ``type``. Devolve a maior
        soma verificada, ou None.
        """
        candidates: list[Pattern] = []
        for _, x in shapes:
            if x not in (ONE, ZERO) and x not in candidates:
                candidates.append(x)
        for declared in self.program.types.values():
            try:
                t = self.engine.resolve(declared)
            except (NonContractiveError, KeyError):
                continue
            if isinstance(t, MailboxType) and t.is_input and t.pattern not in candidates:
                candidates.append(t.pattern)

        best: Pattern | None = None
        for candidate in candidates:
            summands: list[Pattern] = []
            for atom, x in shapes:
                if atom is None:
                    summands.append(ONE)
                    continue
                rest = residual(candidate, atom, self.rel)
                if rest is None or not subpattern(rest, x, self.rel, self.meter):
                    break
                if rest != ZERO:
                    summands.append(Product(atom, rest))
            else:
                narrowed = psum(summands)
                if normal_form_violation(narrowed, self.rel) is not None:
                    continue
                if best is None or subpattern(best, narrowed, self.rel, self.meter):
                    best = narrowed
        return best

    def carried(
        self, v: str, residuals: list[tuple[str, UsageEnv]], pos: Pos
    ) -> list[Pattern] | None:
        """Padrões de ``v`` nas continuações de ramos sobre outras mailboxes."""
        found: list[Pattern] = []
        for u, rest in residuals:
            if u == v:
                continue
            usage = rest.pop(v, None)
            if usage is None or usage.is_int or usage.input is None:
                self.report(
                    INPUT_MISSING,
                    f"o ramo sobre {u} abandona a mailbox guardada {v}",
                    pos,
                )
                return None
            remaining = usage.residual_input(self.engine, self.meter)
            if remaining is None:
                self.report(COMBINATION_UNRESOLVED, f"{v}: {usage} não se resolve", pos)
                return None
            found.append(remaining)
        return found

    def continuation(
        self, u: str, usage: Usage | None, absorbing: bool, pos: Pos
    ) -> Pattern | None:
        """O padrão E de u na continuação de uma recepção (u : ?E)."""
        if usage is None:
            if absorbing:
                return ZERO
            self.report(
                INPUT_MISSING,
                f"a continuação não consome mais de {u} (falta free {u} ou fail {u})",
                pos,
            )
            return None
        if usage.is_int or usage.input is None:
            self.report(
                INPUT_MISSING,
                f"a continuação só envia para {u} ({usage}) e nunca o libera",
                pos,
            )
            return None
        remaining = usage.residual_input(self.engine, self.meter)
        if remaining is None:
            self.report(
                COMBINATION_UNRESOLVED,
                f"{u}: não há F com {usage.input} ≂ {usage.outputs}·F",
                pos,
            )
        return remaining

    def binder(self, x: Param, usage: Usage | None, absorbing: bool, pos: Pos) -> bool:
        if usage is None:
            if absorbing or self.engine.is_irrelevant(x.type):
                return True
            self.report(
                IRRELEVANT_DROP_FAILED,
                f"{x.name}: {x.type} é relevante e não é usado",
                pos,
            )
            return False
        actual = usage.resolve(self.engine, self.meter)
        if actual is None:
            self.report(COMBINATION_UNRESOLVED, f"{x.name}: {usage} não se resolve", pos)
            return False
        if not self.engine.subtype(x.type, actual):
            self.report(
                SUBTYPE,
                f"{x.name}: anotado {x.type}, mas usado como {actual}",
                pos,
            )
            return False
        return True

    def irrelevant(self, usage: Usage) -> bool:
        t = usage.resolve(self.engine, self.meter)
        return t is not None and self.engine.is_irrelevant(t)

    def reconcile(self, envs: list[UsageEnv], pos: Pos, where: str) -> UsageEnv | None:
        """Ambiente residual comum a todos os ramos (t-branch com t-sub)."""
        names = list(dict.fromkeys(name for env in envs for name in env))
        result: UsageEnv = {}
        ok = True
        for name in names:
            usages = [env.get(name) for env in envs]
            present = [u for u in usages if u is not None]
            if len(present) == len(usages) and all(u == present[0] for u in present):
                result[name] = present[0]
                continue
            if all(u.is_int for u in present):
                result[name] = INT_USAGE
                continue
            chosen = self.meet(name, usages, pos, where)
            if chosen is None:
                ok = False
            else:
                result[name] = chosen
        return result if ok else None

    def meet(
        self, name: str, usages: list[Usage | None], pos: Pos, where: str
    ) -> Usage | None:
        if any(u is not None and u.is_int for u in usages):
            self.report(BRANCH_MISMATCH, f"{name} é inteiro em só parte dos ramos ({where})", pos)
            return None
        types: list[TypeExpr] = []
        for usage in usages:
            if usage is None:
                types.append(TOP_OUTPUT)
                continue
            t = usage.resolve(self.engine, self.meter)
            if t is None:
                self.report(COMBINATION_UNRESOLVED, f"{name}: {usage} não se resolve", pos)
                return None
            types.append(t)
        for candidate in types:
            if all(self.engine.subtype(candidate, other) for other in types):
                return Usage.of_type(self.engine.resolve(candidate))
        structural = [self.engine.resolve(t) for t in types]
        if all(not isinstance(t, IntType) and t.is_output for t in structural):
            distinct = list(dict.fromkeys(t.pattern for t in structural))
            return Usage.of_type(out(psum(distinct)))
        rendered = ", ".join(str(t) for t in types)
        self.report(
            BRANCH_MISMATCH,
            f"{name} tem tipos incompatíveis entre os ramos ({where}): {rendered}",
            pos,
        )
        return None


def synthesize(
    p: Process,
    program: Program,
    declared: Mapping[str, TypeExpr] | None = None,
    mixed_guards: bool = False,
    engine: Subtyping | None = None,
) -> tuple[Judgment | None, list[Diagnostic]]:
    """Síntese de ``⊢ P ▹ Γ; φ`` com as assinaturas coletadas de ``P``."""
    engine = engine or Subtyping(program.types)
    signatures = Signatures.collect(p, program, declared)
    synthesizer = Synthesizer(program, engine, signatures, mixed_guards)
    judgment = synthesizer.process(p)
    return judgment, synthesizer.diagnostics
