"""
Álgebra de padrões: semântica, inclusão, resíduos e formas normais.

Padrões usam a gramática de superfície: ``.`` produto, ``+`` soma,
``*`` estrela, ``0`` e ``1``.
"""

from .base import (
    ONE,
    ZERO,
    Atom,
    Config,
    Hole,
    Multiset,
    One,
    Pattern,
    Product,
    Star,
    Sum,
    TypeRelation,
    Zero,
    pprod,
    psum,
    simplify,
)
from .inclusion import InclusionResult, accepts, is_empty, pattern_equiv, subpattern
from .oracle import config_matches, configurations_up_to, matched_in
from .residual import (
    balance_residual,
    is_normal_form,
    largest_cofactor,
    normal_form_violation,
    pattern_quotient,
    residual,
)
from .semilinear import (
    AtomAlphabet,
    CanonicalAtom,
    LinearTerm,
    SemilinearForm,
    WorkMeter,
    normalize,
)

__all__ = [
    "Pattern",
    "Zero",
    "One",
    "Atom",
    "Sum",
    "Product",
    "Star",
    "Hole",
    "ZERO",
    "ONE",
    "Multiset",
    "Config",
    "TypeRelation",
    "psum",
    "pprod",
    "simplify",
    "CanonicalAtom",
    "LinearTerm",
    "SemilinearForm",
    "AtomAlphabet",
    "WorkMeter",
    "normalize",
    "configurations_up_to",
    "config_matches",
    "matched_in",
    "InclusionResult",
    "subpattern",
    "pattern_equiv",
    "is_empty",
    "accepts",
    "residual",
    "is_normal_form",
    "normal_form_violation",
    "largest_cofactor",
    "pattern_quotient",
    "balance_residual",
]
