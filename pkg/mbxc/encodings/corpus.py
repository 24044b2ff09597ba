"""
Corpus de exemplos executáveis.

Cada entrada do ``manifest.json`` aponta para um ``.mbx`` e registra o
veredito esperado do checker, os códigos de diagnóstico que devem
aparecer e, quando faz sentido, o que a exploração do runtime precisa
encontrar. Entradas com ``session`` recebem as definições geradas a
partir do ``.st`` correspondente.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from mbxc.config import CORPUS_DIR
from mbxc.errors import MbxcError
from mbxc.patterns import Pattern
from mbxc.syntax import parse, parse_pattern
from mbxc.syntax.ast import Program

from .sessions import generate_session_process, parse_session

logger = logging.getLogger(__name__)

MANIFEST = "manifest.json"


@dataclass(frozen=True)
class RuntimeExpectation:
    """O que a exploração completa deve encontrar; None = não verificado."""

    fail: bool | None = None
    deadlock: bool | None = None
    terminates: bool | None = None
    prints: tuple[int, ...] | None = None


@dataclass(frozen=True)
class BoundExpectation:
    mailbox: str
    tag: str
    max: int


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    path: Path
    verdict: str
    codes: tuple[str, ...] = ()
    mixed_guards: bool = False
    default_codes: tuple[str, ...] = ()
    session: Path | None = None
    runtime: RuntimeExpectation | None = None
    bounds: BoundExpectation | None = None
    solution: dict[str, str] = field(default_factory=dict)

    @property
    def expects_ok(self) -> bool:
        return self.verdict == "ok"

    @property
    def has_holes(self) -> bool:
        return bool(self.solution)

    def solution_patterns(self) -> dict[str, Pattern]:
        return {hole: parse_pattern(text) for hole, text in self.solution.items()}

    def load(self) -> Program:
        return load_program(self)


def _entry(raw: dict, directory: Path) -> CorpusEntry:
    try:
        name = raw["name"]
        path = directory / raw["file"]
        verdict = raw["verdict"]
    except KeyError as exc:
        raise MbxcError(f"entrada do manifesto sem o campo {exc}") from exc
    if verdict not in ("ok", "error"):
        raise MbxcError(f"{name}: veredito desconhecido '{verdict}'")

    runtime = None
    if "runtime" in raw:
        spec = raw["runtime"]
        prints = spec.get("prints")
        runtime = RuntimeExpectation(
            fail=spec.get("fail"),
            deadlock=spec.get("deadlock"),
            terminates=spec.get("terminates"),
            prints=None if prints is None else tuple(prints),
        )
    bounds = None
    if "bounds" in raw:
        bounds = BoundExpectation(**raw["bounds"])
    session = raw.get("session")
    return CorpusEntry(
        name=name,
        path=path,
        verdict=verdict,
        codes=tuple(raw.get("codes", ())),
        mixed_guards=raw.get("mixed_guards", False),
        default_codes=tuple(raw.get("default_codes", ())),
        session=None if session is None else directory / session,
        runtime=runtime,
        bounds=bounds,
        solution=dict(raw.get("solution", {})),
    )


def load_manifest(directory: Path = CORPUS_DIR) -> list[CorpusEntry]:
    """Lê o manifesto do corpus, na ordem em que as entradas aparecem."""
    manifest = directory / MANIFEST
    try:
        data = json.loads(manifest.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MbxcError(f"{manifest}: JSON inválido ({exc})") from exc
    entries = [_entry(raw, directory) for raw in data.get("entries", [])]
    logger.debug("📚 %d entradas em %s", len(entries), manifest)
    return entries


def corpus_entry(name: str, directory: Path = CORPUS_DIR) -> CorpusEntry:
    for entry in load_manifest(directory):
        if entry.name == name:
            return entry
    raise MbxcError(f"exemplo '{name}' não está no corpus")


def load_program(entry: CorpusEntry) -> Program:
    prelude = None
    if entry.session is not None:
        spec = parse_session(entry.session.read_text(encoding="utf-8"))
        prelude = generate_session_process(spec)
    return parse(entry.path.read_text(encoding="utf-8"), prelude=prelude)


__all__ = [
    "BoundExpectation",
    "CorpusEntry",
    "RuntimeExpectation",
    "corpus_entry",
    "load_manifest",
    "load_program",
]
