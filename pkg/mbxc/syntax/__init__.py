"""
Linguagem de superfície do cálculo de mailboxes: AST, parser, impressão,
nomes livres, substituição e forma normal por congruência estrutural.
"""

from .ast import (
    DONE,
    PRINT_TAG,
    SYSTEM,
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
    par_all,
    par_components,
)
from .congruence import (
    all_names,
    canonical_key,
    congruence_normal_form,
    evaluate,
    evaluate_cond,
    free_names,
    nf_parts,
    normal_form,
    shape,
    substitute,
)
from .parser import parse, parse_graph, parse_pattern, parse_process, parse_type
from .printer import print_definition, print_process, print_program
from .scope import RAPIDFUZZ_AVAILABLE, did_you_mean

__all__ = [
    "Process",
    "Done",
    "Invoke",
    "Send",
    "Par",
    "New",
    "If",
    "GuardedProcess",
    "Branch",
    "Fail",
    "Free",
    "Receive",
    "Param",
    "Arg",
    "Var",
    "IntLit",
    "BinOp",
    "Cond",
    "Definition",
    "Program",
    "DONE",
    "SYSTEM",
    "PRINT_TAG",
    "par_all",
    "par_components",
    "parse",
    "parse_process",
    "parse_type",
    "parse_pattern",
    "parse_graph",
    "print_process",
    "print_program",
    "print_definition",
    "free_names",
    "all_names",
    "substitute",
    "evaluate",
    "evaluate_cond",
    "congruence_normal_form",
    "normal_form",
    "canonical_key",
    "shape",
    "nf_parts",
    "did_you_mean",
    "RAPIDFUZZ_AVAILABLE",
]
