"""
Assinaturas de mensagens por nome.

Para tipar ``u!ℓ(v̄)`` é preciso saber os tipos de argumento que ``u``
espera para ``ℓ``. As fontes, em ordem: o tipo declarado de ``u``
(parâmetro de definição ou de recepção), os ramos de recepção sobre
``u``, os parâmetros de definições invocadas com ``u`` e, até um ponto
fixo, as posições de argumento de mensagens que carregam ``u``.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Callable, Iterator, Mapping

from mbxc.patterns import Atom
from mbxc.patterns.base import atoms_of
from mbxc.syntax.ast import (
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
from mbxc.types import MailboxType, NonContractiveError, TypeExpr, TypeTable

Source = TypeExpr | Atom


class Signatures:
    def __init__(self, table: TypeTable):
        self.table = table
        self.sources: defaultdict[str, list[Source]] = defaultdict(list)

    def _add(self, name: str, source: Source) -> bool:
        if source in self.sources[name]:
            return False
        self.sources[name].append(source)
        return True

    def declare(self, name: str, t: TypeExpr) -> bool:
        return self._add(name, t)

    def add_atom(self, name: str, atom: Atom) -> bool:
        return self._add(name, atom)

    def atoms(self, name: str) -> Iterator[Atom]:
        for source in self.sources.get(name, []):
            if isinstance(source, Atom):
                yield source
                continue
            try:
                resolved = self.table.resolve(source)
            except (KeyError, NonContractiveError):
                continue
            if isinstance(resolved, MailboxType):
                yield from atoms_of(resolved.pattern)

    def lookup(self, name: str, tag: str, arity: int) -> Atom | None:
        for atom in self.atoms(name):
            if atom.tag == tag and len(atom.args) == arity:
                return atom
        return None

    def known(self, name: str) -> list[str]:
        return sorted({f"{a.tag}/{len(a.args)}" for a in self.atoms(name)})

    def mapped(self, fn: Callable[[TypeExpr], TypeExpr]) -> Signatures:
        """Cópia com ``fn`` aplicada a cada tipo (preenchimento de variáveis)."""
        copy = Signatures(self.table)
        for name, sources in self.sources.items():
            for source in sources:
                if isinstance(source, Atom):
                    copy.add_atom(name, Atom(source.tag, tuple(fn(a) for a in source.args)))
                else:
                    copy.declare(name, fn(source))
        return copy

    @classmethod
    def collect(
        cls,
        p: Process,
        program: Program,
        declared: Mapping[str, TypeExpr] | None = None,
    ) -> Signatures:
        signatures = cls(program.types)
        for name, t in (declared or {}).items():
            signatures.declare(name, t)
        sends: list[Send] = []

        def walk(q: Process) -> None:
            match q:
                case Send():
                    sends.append(q)
                case Invoke(name, args):
                    definition = program.definitions.get(name)
                    if definition is None:
                        return
                    for param, arg in zip(definition.params, args, strict=False):
                        if isinstance(arg, Var):
                            signatures.declare(arg.name, param.type)
                case Par(left, right):
                    walk(left)
                    walk(right)
                case New(_, body):
                    walk(body)
                case If(_, then, orelse):
                    walk(then)
                    walk(orelse)
                case GuardedProcess(branches):
                    for branch in branches:
                        if isinstance(branch, Receive):
                            atom = Atom(branch.tag, tuple(x.type for x in branch.params))
                            signatures.add_atom(branch.name, atom)
                            for x in branch.params:
                                signatures.declare(x.name, x.type)
                        if isinstance(branch, Free | Receive):
                            walk(branch.body)

        walk(p)
        changed = True
        while changed:
            changed = False
            for send in sends:
                atom = signatures.lookup(send.target, send.tag, len(send.args))
                if atom is None:
                    continue
                for arg, t in zip(send.args, atom.args, strict=True):
                    if isinstance(arg, Var) and signatures.declare(arg.name, t):
                        changed = True
        return signatures
