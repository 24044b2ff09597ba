"""
Diagnósticos e relatórios do checker.

Erros de tipagem são valores, não exceções: cada rejeição carrega ao
menos um ``Diagnostic`` com código estável e posição no fonte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mbxc.syntax.ast import Pos

# Códigos estáveis (usados no JSON e nos testes)
CYCLE = "cycle"
NF_VIOLATION = "nf-violation"
UNRELIABLE_ENV = "unreliable-env"
COMBINATION_UNDEFINED = "combination-undefined"
COMBINATION_UNRESOLVED = "combination-unresolved"
ARITY = "arity"
IRRELEVANT_DROP_FAILED = "irrelevant-drop-failed"
SUBTYPE = "subtype"
GRAPH_ENTAILMENT = "graph-entailment"
UNKNOWN_SIGNATURE = "unknown-signature"
ARGUMENT = "argument"
BRANCH_MISMATCH = "branch-mismatch"
MIXED_GUARD = "mixed-guard"
INPUT_MISSING = "input-missing"
NEW_UNBALANCED = "new-unbalanced"
NOT_CLOSED = "not-closed"
SYSTEM_USAGE = "system-usage"
GLOBAL_ASSUMPTION = "global-assumption"
HOLES = "holes"
UNDECIDED = "undecided"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    pos: Pos = None
    witness: str | None = None

    def __str__(self) -> str:
        line, column = self.pos or (0, 0)
        text = f"{line}:{column}: [{self.code}] {self.message}"
        if self.witness:
            text += f" (testemunha: {self.witness})"
        return text

    def to_dict(self) -> dict:
        line, column = self.pos or (None, None)
        return {
            "code": self.code,
            "message": self.message,
            "line": line,
            "column": column,
            "witness": self.witness,
        }


def _sorted(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    return sorted(diagnostics, key=lambda d: (d.pos or (0, 0), d.code, d.message))


@dataclass
class Verdict:
    """Resultado do checker para uma definição, para ``main`` ou para um estado."""

    name: str
    env: dict[str, str] = field(default_factory=dict)
    graph: str = "{}"
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.diagnostics

    def __bool__(self) -> bool:
        return self.ok

    @property
    def codes(self) -> list[str]:
        return [d.code for d in self.diagnostics]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "verdict": "ok" if self.ok else "error",
            "env": dict(sorted(self.env.items())),
            "graph": self.graph,
            "diagnostics": [d.to_dict() for d in _sorted(self.diagnostics)],
        }


CheckResult = Verdict


@dataclass
class Report:
    """Veredito de um programa inteiro."""

    definitions: list[Verdict] = field(default_factory=list)
    diagnostics: list[Diagnostic] = field(default_factory=list)
    mixed_guards: bool = False

    @property
    def ok(self) -> bool:
        return not self.diagnostics and all(v.ok for v in self.definitions)

    def __bool__(self) -> bool:
        return self.ok

    def verdict(self, name: str) -> Verdict:
        for v in self.definitions:
            if v.name == name:
                return v
        raise KeyError(name)

    @property
    def all_diagnostics(self) -> list[Diagnostic]:
        found = list(self.diagnostics)
        for v in self.definitions:
            found.extend(v.diagnostics)
        return _sorted(found)

    @property
    def codes(self) -> set[str]:
        return {d.code for d in self.all_diagnostics}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "mixed_guards": self.mixed_guards,
            "definitions": [v.to_dict() for v in self.definitions],
            "diagnostics": [d.to_dict() for d in _sorted(self.diagnostics)],
        }
