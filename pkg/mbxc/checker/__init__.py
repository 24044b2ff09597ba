"""
Checker de tipos: síntese de ambientes e grafos, verificação de
definições e de ``main``, guards mistos e geração de restrições.
"""

from .constraints import (
    ConstraintSet,
    Falsity,
    Residual,
    SubPattern,
    TypeLeq,
    check_solution,
    generate_constraints,
)
from .diagnostics import CheckResult, Diagnostic, Report, Verdict
from .program import (
    MAIN,
    check_definition,
    check_guard_mixed,
    check_process,
    check_program,
    program_holes,
)
from .signatures import Signatures
from .synthesis import Judgment, Synthesizer, synthesize
from .usage import Usage, par_envs

__all__ = [
    "MAIN",
    "CheckResult",
    "ConstraintSet",
    "Diagnostic",
    "Falsity",
    "Judgment",
    "Report",
    "Residual",
    "Signatures",
    "SubPattern",
    "Synthesizer",
    "TypeLeq",
    "Usage",
    "Verdict",
    "check_definition",
    "check_guard_mixed",
    "check_process",
    "check_program",
    "check_solution",
    "generate_constraints",
    "par_envs",
    "program_holes",
    "synthesize",
]
