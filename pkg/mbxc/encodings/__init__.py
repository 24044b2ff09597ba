"""
Codificações sobre o cálculo: sessões binárias (com fork/join) como
processos mediadores e o corpus de exemplos executáveis.
"""

from .corpus import (
    BoundExpectation,
    CorpusEntry,
    RuntimeExpectation,
    corpus_entry,
    load_manifest,
    load_program,
)
from .sessions import (
    END,
    End,
    ExtChoice,
    Fork,
    In,
    IntChoice,
    Join,
    Out,
    Ref,
    SessionFile,
    SessionType,
    check_regular,
    dual,
    encode_pattern,
    generate_session_process,
    parse_session,
    render,
)

__all__ = [
    "END",
    "BoundExpectation",
    "CorpusEntry",
    "End",
    "ExtChoice",
    "Fork",
    "In",
    "IntChoice",
    "Join",
    "Out",
    "Ref",
    "RuntimeExpectation",
    "SessionFile",
    "SessionType",
    "check_regular",
    "corpus_entry",
    "dual",
    "encode_pattern",
    "generate_session_process",
    "load_manifest",
    "load_program",
    "parse_session",
    "render",
]
