"""
Geração de restrições de padrão para programas com buracos.

Cada uso de nome recebe uma variável fresca ``κα`` e as regras de
inferência emitem restrições ``E ⊑ F``, ``κE ≤ κF``, ``α ≪ ℓ(κ̄ᾱ)`` e
falsidades (ciclos, grafos não implicados). A resolução não faz parte
do pacote: ``check_solution`` só verifica uma atribuição candidata,
completando as variáveis frescas pela ordem em que foram definidas.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field

from mbxc.depgraph import (
    EMPTY,
    DepGraph,
    acyclic,
    edges_from,
    entails,
    restrict,
    substitute_graph,
    to_text,
    union,
)
from mbxc.errors import UndecidedError
from mbxc.patterns import (
    ONE,
    ZERO,
    Atom,
    Hole,
    Pattern,
    Product,
    Star,
    Sum,
    largest_cofactor,
    pattern_equiv,
    psum,
    residual,
    subpattern,
)
from mbxc.syntax.ast import (
    SYSTEM,
    Definition,
    Done,
    Fail,
    Free,
    GuardedProcess,
    If,
    Invoke,
    New,
    Par,
    Process,
    Program,
    Receive,
    Send,
    Var,
)
from mbxc.syntax.congruence import arg_names
from mbxc.types import (
    INT,
    TOP_OUTPUT,
    Capability,
    IntType,
    MailboxType,
    Subtyping,
    TypeExpr,
    TypeTable,
    inp,
    out,
)

from .program import MAIN, program_holes, type_holes
from .signatures import Signatures
from .synthesis import CONSOLE, PRINT_ATOM

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Restrições
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubPattern:
    left: Pattern
    right: Pattern
    rule: str

    def __str__(self) -> str:
        return f"{self.left} ⊑ {self.right}"


@dataclass(frozen=True)
class TypeLeq:
    left: TypeExpr
    right: TypeExpr
    rule: str

    def __str__(self) -> str:
        return f"{self.left} ≤ {self.right}"


@dataclass(frozen=True)
class Residual:
    """α ≪ ℓ(κ̄ᾱ): α é o que resta depois de consumir o átomo."""

    var: Pattern
    atom: Atom
    rule: str = "i-input"

    def __str__(self) -> str:
        return f"{self.var} ≪ {self.atom}"


@dataclass(frozen=True)
class Falsity:
    reason: str
    rule: str

    def __str__(self) -> str:
        return f"⊥ ({self.reason})"


Constraint = SubPattern | TypeLeq | Residual | Falsity


# ---------------------------------------------------------------------------
# Definições das variáveis frescas (usadas só na verificação)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    """α := E."""

    var: str
    pattern: Pattern

    def solve(self, solution: _Solution) -> Pattern | None:
        return solution.closed(self.pattern)


@dataclass(frozen=True)
class Cofactor:
    """α := maior D com part·D ⊑ total."""

    var: str
    total: Pattern
    part: Pattern

    def solve(self, solution: _Solution) -> Pattern | None:
        total, part = solution.closed(self.total), solution.closed(self.part)
        if total is None or part is None:
            return None
        return largest_cofactor(total, part, solution.rel)


@dataclass(frozen=True)
class Meet:
    """α abaixo de todos os ramos: soma para saídas, o menor para entradas."""

    var: str
    parts: tuple[Pattern, ...]
    capability: Capability

    def solve(self, solution: _Solution) -> Pattern | None:
        parts = [solution.closed(p) for p in self.parts]
        if any(p is None for p in parts):
            return None
        if self.capability is Capability.OUTPUT:
            return psum(list(dict.fromkeys(parts)))
        for candidate in parts:
            if all(subpattern(candidate, other, solution.rel) for other in parts):
                return candidate
        return parts[0]


@dataclass(frozen=True, eq=False)
class Hint:
    """α := padrão do i-ésimo argumento de ``target!tag/arity``."""

    var: str
    signatures: Signatures
    target: str
    tag: str
    arity: int
    index: int

    def solve(self, solution: _Solution) -> Pattern | None:
        atom = solution.signatures(self.signatures).lookup(self.target, self.tag, self.arity)
        if atom is None:
            return None
        return solution.pattern_of(atom.args[self.index])


@dataclass(frozen=True)
class Declared:
    """α := padrão de um tipo declarado."""

    var: str
    type: TypeExpr

    def solve(self, solution: _Solution) -> Pattern | None:
        return solution.pattern_of(self.type)


Solver = Bound | Cofactor | Meet | Hint | Declared


@dataclass
class ConstraintSet:
    constraints: list[Constraint] = field(default_factory=list)
    solvers: list[Solver] = field(default_factory=list)
    types: TypeTable = field(default_factory=TypeTable)
    holes: list[str] = field(default_factory=list)
    """Buracos escritos pelo usuário (as incógnitas)."""

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.constraints)

    @property
    def fresh(self) -> list[str]:
        return [s.var for s in self.solvers]

    def by_rule(self) -> Counter[str]:
        return Counter(c.rule for c in self.constraints)

    def lines(self) -> list[str]:
        return [f"[{c.rule}] {c}" for c in self.constraints]


# ---------------------------------------------------------------------------
# Geração
# ---------------------------------------------------------------------------

Env = dict[str, TypeExpr]


@dataclass
class _Inferred:
    env: Env = field(default_factory=dict)
    graph: DepGraph = EMPTY
    absorbing: bool = False


def _var(t: TypeExpr) -> Pattern:
    assert isinstance(t, MailboxType)
    return t.pattern


def _with(capability: Capability, pattern: Pattern) -> MailboxType:
    return MailboxType(capability, pattern)


class ConstraintGenerator:
    def __init__(self, program: Program):
        self.program = program
        self.result = ConstraintSet(types=program.types, holes=program_holes(program))
        self._taken = set(self.result.holes)
        self._counter = 0
        self._ints: set[str] = set()
        self._signatures = Signatures(program.types)

    def fresh(self) -> Hole:
        while True:
            self._counter += 1
            name = f"_a{self._counter}"
            if name not in self._taken:
                return Hole(name)

    def emit(self, constraint: Constraint) -> None:
        self.result.constraints.append(constraint)

    def solver(self, solver: Solver) -> None:
        self.result.solvers.append(solver)

    def resolve(self, t: TypeExpr) -> IntType | MailboxType | None:
        try:
            return self.program.types.resolve(t)
        except (KeyError, ValueError):
            return None

    def is_int(self, t: TypeExpr) -> bool:
        return isinstance(self.resolve(t), IntType)

    # Ambientes

    def join(self, name: str, left: TypeExpr, right: TypeExpr) -> TypeExpr:
        """Combinação paralela com restrições (i-par)."""
        if isinstance(left, IntType) or isinstance(right, IntType):
            if not (isinstance(left, IntType) and isinstance(right, IntType)):
                self.emit(Falsity(f"{name} é inteiro e mailbox ao mesmo tempo", "i-par"))
            return INT
        alpha = self.fresh()
        if left.is_input and right.is_input:
            self.emit(Falsity(f"{name} tem duas entradas em paralelo", "i-par"))
            return inp(alpha)
        if left.is_output and right.is_output:
            product = Product(_var(left), _var(right))
            self.emit(TypeLeq(out(alpha), out(product), "i-par"))
            self.solver(Bound(alpha.name, product))
            return out(alpha)
        sender, receiver = (left, right) if left.is_output else (right, left)
        self.emit(TypeLeq(inp(Product(_var(sender), alpha)), receiver, "i-par"))
        self.solver(Cofactor(alpha.name, _var(receiver), _var(sender)))
        return inp(alpha)

    def add(self, env: Env, name: str, t: TypeExpr) -> None:
        env[name] = self.join(name, env[name], t) if name in env else t

    def merge(self, envs: list[Env], rule: str) -> Env:
        """Ambiente comum a ramos alternativos (operador de merge)."""
        result: Env = {}
        for name in dict.fromkeys(n for env in envs for n in env):
            entries = [env.get(name) for env in envs]
            present = [t for t in entries if t is not None]
            if all(isinstance(t, IntType) for t in present):
                result[name] = INT
                continue
            if any(isinstance(t, IntType) for t in present):
                self.emit(Falsity(f"{name} é inteiro em só parte dos ramos", rule))
                continue
            if len(present) == len(entries) and len(set(present)) == 1:
                result[name] = present[0]
                continue
            capability = (
                Capability.INPUT if any(t.is_input for t in present) else Capability.OUTPUT
            )
            alpha = self.fresh()
            merged = _with(capability, alpha)
            parts = []
            for t in entries:
                if t is None:
                    self.emit(TypeLeq(merged, TOP_OUTPUT, "i-sub"))
                    parts.append(ONE)
                else:
                    self.emit(TypeLeq(merged, t, rule))
                    parts.append(_var(t))
            self.solver(Meet(alpha.name, tuple(parts), capability))
            result[name] = merged
        return result

    @staticmethod
    def mailbox_names(env: Env) -> list[str]:
        return [n for n, t in env.items() if not isinstance(t, IntType) and n != SYSTEM]

    def acyclic(self, graph: DepGraph, rule: str) -> None:
        if not acyclic(graph):
            self.emit(Falsity(f"ciclo em {to_text(graph)}", rule))

    # Processos

    def process(self, p: Process) -> _Inferred:
        match p:
            case Done():
                return _Inferred()
            case Send():
                return self.send(p)
            case Invoke():
                return self.invoke(p)
            case Par(left, right):
                lhs, rhs = self.process(left), self.process(right)
                env = dict(lhs.env)
                for name, t in rhs.env.items():
                    self.add(env, name, t)
                graph = union(lhs.graph, rhs.graph)
                self.acyclic(graph, "i-par")
                return _Inferred(env, graph)
            case New(name, body):
                return self.new(name, self.process(body))
            case If(cond, then, orelse):
                branches = [self.process(then), self.process(orelse)]
                live = [b for b in branches if not b.absorbing] or branches
                env = self.merge([b.env for b in live], "i-if")
                for name in arg_names(cond.left) | arg_names(cond.right):
                    self.add(env, name, INT)
                graph = union(*(b.graph for b in live))
                return _Inferred(env, graph, all(b.absorbing for b in branches))
            case GuardedProcess():
                return self.guard(p)
        raise TypeError(f"processo inválido: {p!r}")

    def send(self, p: Send) -> _Inferred:
        if p.target == SYSTEM:
            alpha = self.fresh()
            self.solver(Bound(alpha.name, PRINT_ATOM))
            env: Env = {SYSTEM: out(alpha)}
            for name in arg_names(p.args[0]) if p.args else ():
                self.add(env, name, INT)
            return _Inferred(env)
        known = self._signatures.lookup(p.target, p.tag, len(p.args))
        env = {}
        args: list[TypeExpr] = []
        carried: list[str] = []
        for index, arg in enumerate(p.args):
            expected = None if known is None else self.resolve(known.args[index])
            if not isinstance(arg, Var) or arg.name in self._ints or isinstance(expected, IntType):
                args.append(INT)
                for name in arg_names(arg):
                    self.add(env, name, INT)
                continue
            capability = expected.capability if expected is not None else Capability.OUTPUT
            alpha = self.fresh()
            self.solver(
                Hint(alpha.name, self._signatures, p.target, p.tag, len(p.args), index)
            )
            t = _with(capability, alpha)
            args.append(t)
            self.add(env, arg.name, t)
            carried.append(arg.name)
        atom = Atom(p.tag, tuple(args))
        beta = self.fresh()
        self.emit(TypeLeq(out(beta), out(atom), "i-message"))
        self.solver(Bound(beta.name, atom))
        self.add(env, p.target, out(beta))
        return _Inferred(env, edges_from(p.target, carried))

    def invoke(self, p: Invoke) -> _Inferred:
        definition = self.program.definitions.get(p.name)
        if definition is None or len(definition.params) != len(p.args):
            self.emit(Falsity(f"invocação malformada de {p.name}", "i-invoke"))
            return _Inferred()
        env: Env = {}
        mapping: dict[str, str] = {}
        for param, arg in zip(definition.params, p.args, strict=True):
            declared = self.resolve(param.type)
            if isinstance(declared, IntType) or not isinstance(arg, Var):
                for name in arg_names(arg):
                    self.add(env, name, INT)
                continue
            capability = declared.capability if declared else Capability.OUTPUT
            alpha = self.fresh()
            t = _with(capability, alpha)
            self.emit(TypeLeq(t, param.type, "i-invoke"))
            self.solver(Declared(alpha.name, param.type))
            self.add(env, arg.name, t)
            mapping[param.name] = arg.name
        graph = substitute_graph(definition.graph, mapping)
        self.acyclic(graph, "i-invoke")
        return _Inferred(env, graph)

    def new(self, name: str, body: _Inferred) -> _Inferred:
        env = dict(body.env)
        t = env.pop(name, None)
        if t is None:
            if not body.absorbing:
                self.emit(Falsity(f"{name} não é usada no seu escopo", "i-new"))
        elif isinstance(t, IntType) or t.is_output:
            self.emit(Falsity(f"{name} nunca é consumida", "i-new"))
        else:
            self.emit(SubPattern(ONE, t.pattern, "i-new"))
        return _Inferred(env, restrict(name, body.graph), body.absorbing)

    def guard(self, g: GuardedProcess) -> _Inferred:
        if len(g.mailboxes) != 1:
            self.emit(Falsity("guard sobre mais de uma mailbox", "i-input"))
            return _Inferred(absorbing=True)
        (u,) = g.mailboxes
        terms: list[Pattern] = []
        rests: list[Env] = []
        for branch in g.branches:
            match branch:
                case Fail():
                    terms.append(ZERO)
                case Free(_, body):
                    j = self.process(body)
                    rest = dict(j.env)
                    leftover = rest.pop(u, None)
                    if leftover is not None:
                        self.emit(TypeLeq(leftover, TOP_OUTPUT, "i-sub"))
                    terms.append(ONE)
                    if not j.absorbing:
                        rests.append(rest)
                case Receive(_, tag, params, body):
                    j = self.process(body)
                    rest = dict(j.env)
                    for x in params:
                        t = rest.pop(x.name, None)
                        if t is None:
                            if not j.absorbing:
                                self.emit(TypeLeq(x.type, TOP_OUTPUT, "i-sub"))
                        elif not isinstance(t, IntType):
                            self.emit(TypeLeq(x.type, t, "i-input"))
                    atom = Atom(tag, tuple(x.type for x in params))
                    after = self.continuation(u, rest, j.absorbing)
                    terms.append(Product(atom, after))
                    self.emit(Residual(after, atom))
                    if not j.absorbing:
                        rests.append(rest)
        total = psum(terms)
        gamma = self.fresh()
        self.emit(TypeLeq(inp(gamma), inp(total), "i-input"))
        self.solver(Bound(gamma.name, total))
        env = self.merge(rests, "i-input") if rests else {}
        graph = edges_from(u, self.mailbox_names(env))
        env[u] = inp(gamma)
        return _Inferred(env, graph, absorbing=not rests)

    def continuation(self, u: str, rest: Env, absorbing: bool) -> Pattern:
        t = rest.pop(u, None)
        if isinstance(t, MailboxType) and t.is_input:
            return t.pattern
        if t is None and absorbing:
            return ZERO
        self.emit(Falsity(f"a continuação não consome mais de {u}", "i-input"))
        return ZERO

    # Definições

    def close(self, env: Env, where: str) -> None:
        console = env.pop(SYSTEM, None)
        if isinstance(console, MailboxType):
            self.emit(TypeLeq(out(CONSOLE), console, "system"))
        for name, t in env.items():
            if not isinstance(t, IntType):
                self.emit(TypeLeq(t, TOP_OUTPUT, "i-sub"))
                logger.debug("🔍 %s: %s sobra no ambiente de %s", name, t, where)

    def scope_ints(self, p: Process, params=()) -> set[str]:
        found = {x.name for x in params if self.is_int(x.type)}

        def walk(q: Process) -> None:
            match q:
                case Par(left, right) | If(_, left, right):
                    walk(left)
                    walk(right)
                case New(_, body):
                    walk(body)
                case GuardedProcess(branches):
                    for branch in branches:
                        if isinstance(branch, Receive):
                            found.update(x.name for x in branch.params if self.is_int(x.type))
                        if isinstance(branch, Free | Receive):
                            walk(branch.body)

        walk(p)
        return found

    def definition(self, d: Definition) -> None:
        logger.debug("🔍 restrições de %s", d.name)
        declared = {x.name: x.type for x in d.params}
        self._signatures = Signatures.collect(d.body, self.program, declared)
        self._ints = self.scope_ints(d.body, d.params)
        j = self.process(d.body)
        env = dict(j.env)
        for x in d.params:
            t = env.pop(x.name, None)
            if t is None:
                self.emit(TypeLeq(x.type, TOP_OUTPUT, "i-sub"))
            elif not isinstance(t, IntType):
                self.emit(TypeLeq(x.type, t, "i-def"))
        self.close(env, d.name)
        if not entails(d.graph, j.graph):
            self.emit(
                Falsity(
                    f"{to_text(d.graph)} não implica {to_text(j.graph)} em {d.name}",
                    "i-def",
                )
            )

    def main(self, p: Process) -> None:
        self._signatures = Signatures.collect(p, self.program)
        self._ints = self.scope_ints(p)
        self.close(dict(self.process(p).env), MAIN)


def generate_constraints(program: Program) -> ConstraintSet:
    """Transcreve as regras de inferência para todo o programa."""
    generator = ConstraintGenerator(program)
    for definition in program.definitions.values():
        generator.definition(definition)
    if program.main is not None:
        generator.main(program.main)
    result = generator.result
    logger.info(
        "✅ %d restrições, %d variáveis frescas, %d buracos",
        len(result),
        len(result.solvers),
        len(result.holes),
    )
    return result


# ---------------------------------------------------------------------------
# Verificação de soluções
# ---------------------------------------------------------------------------


class _Solution:
    def __init__(self, constraints: ConstraintSet, assignment: Mapping[str, Pattern]):
        self.values: dict[str, Pattern] = dict(assignment)
        table = TypeTable({n: self.fill_type(t) for n, t in constraints.types.items()})
        self.engine = Subtyping(table)
        self.rel = self.engine.subtype
        self._mapped: dict[int, Signatures] = {}

    def fill(self, p: Pattern) -> Pattern:
        match p:
            case Hole(name):
                return self.values.get(name, p)
            case Atom(tag, args):
                return Atom(tag, tuple(self.fill_type(a) for a in args))
            case Sum(left, right):
                return Sum(self.fill(left), self.fill(right))
            case Product(left, right):
                return Product(self.fill(left), self.fill(right))
            case Star(body):
                return Star(self.fill(body))
        return p

    def fill_type(self, t: TypeExpr) -> TypeExpr:
        if isinstance(t, MailboxType):
            return MailboxType(t.capability, self.fill(t.pattern))
        return t

    def closed(self, p: Pattern) -> Pattern | None:
        filled = self.fill(p)
        return None if any(type_holes(inp(filled))) else filled

    def pattern_of(self, t: TypeExpr) -> Pattern | None:
        try:
            resolved = self.engine.resolve(self.fill_type(t))
        except (KeyError, ValueError):
            return None
        if not isinstance(resolved, MailboxType):
            return None
        return self.closed(resolved.pattern)

    def signatures(self, signatures: Signatures) -> Signatures:
        key = id(signatures)
        if key not in self._mapped:
            self._mapped[key] = signatures.mapped(self.fill_type)
        return self._mapped[key]

    def unresolved(self, constraint: Constraint) -> list[str]:
        match constraint:
            case SubPattern(left, right, _):
                types = [inp(left), inp(right)]
            case TypeLeq(left, right, _):
                types = [left, right]
            case Residual(var, atom, _):
                types = [inp(Product(atom, var))]
            case _:
                types = []
        return sorted({h for t in types for h in type_holes(self.fill_type(t))})

    def holds(self, constraint: Constraint) -> bool:
        match constraint:
            case SubPattern(left, right, _):
                return subpattern(self.fill(left), self.fill(right), self.rel).holds
            case TypeLeq(left, right, _):
                return self.engine.subtype(self.fill_type(left), self.fill_type(right))
            case Residual(var, atom, _):
                value, message = self.fill(var), self.fill(atom)
                rest = residual(Product(message, value), message, self.rel)
                return rest is not None and pattern_equiv(rest, value, self.rel)
        return False


def check_solution(
    constraints: ConstraintSet, assignment: Mapping[str, Pattern]
) -> list[str]:
    """Restrições violadas pela atribuição (lista vazia quando todas valem)."""
    problems = [f"{h}: sem valor" for h in constraints.holes if h not in assignment]
    solution = _Solution(constraints, assignment)
    try:
        for solver in constraints.solvers:
            if solver.var in solution.values:
                continue
            value = solver.solve(solution)
            if value is not None:
                solution.values[solver.var] = value
        for constraint in constraints:
            missing = solution.unresolved(constraint)
            if missing:
                problems.append(
                    f"[{constraint.rule}] {constraint}: variáveis sem valor {', '.join(missing)}"
                )
            elif not solution.holds(constraint):
                filled = _render_filled(constraint, solution)
                problems.append(f"[{constraint.rule}] {constraint} falha: {filled}")
    except UndecidedError as exc:
        problems.append(str(exc))
    if problems:
        logger.info("⚠️ %d restrição(ões) violada(s)", len(problems))
    return problems


def _render_filled(constraint: Constraint, solution: _Solution) -> str:
    match constraint:
        case SubPattern(left, right, _):
            return f"{solution.fill(left)} ⊑ {solution.fill(right)}"
        case TypeLeq(left, right, _):
            return f"{solution.fill_type(left)} ≤ {solution.fill_type(right)}"
        case Residual(var, atom, _):
            return f"{solution.fill(var)} ≪ {solution.fill(atom)}"
    return str(constraint)
