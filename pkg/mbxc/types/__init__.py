"""
Tipos de mailbox, subtipagem coinductiva e operadores de combinação.
"""

from .base import (
    EMPTY_INPUT,
    INT,
    TOP_OUTPUT,
    UNUSABLE,
    Capability,
    IntType,
    MailboxType,
    NonContractiveError,
    TypeExpr,
    TypeRef,
    TypeTable,
    inp,
    nested_types,
    out,
)
from .environments import (
    TypeEnv,
    combine_envs,
    combine_types,
    env_subtype,
    env_subtype_violations,
    is_reliable_env,
)
from .subtyping import (
    Subtyping,
    TypeClassification,
    TypeDiagnostic,
    check_global_assumptions,
    classify,
    subtype,
    type_equiv,
)

__all__ = [
    "Capability",
    "IntType",
    "MailboxType",
    "TypeRef",
    "TypeExpr",
    "TypeTable",
    "NonContractiveError",
    "INT",
    "TOP_OUTPUT",
    "EMPTY_INPUT",
    "UNUSABLE",
    "inp",
    "out",
    "nested_types",
    "Subtyping",
    "TypeClassification",
    "TypeDiagnostic",
    "subtype",
    "type_equiv",
    "classify",
    "check_global_assumptions",
    "TypeEnv",
    "combine_types",
    "combine_envs",
    "env_subtype",
    "env_subtype_violations",
    "is_reliable_env",
]
