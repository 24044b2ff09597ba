"""
Testes de tipos de mailbox: subtipagem, classificação, combinação de
tipos e de ambientes e hipóteses globais.
"""

import pytest

from mbxc.syntax import parse, parse_type
from mbxc.types import (
    INT,
    NonContractiveError,
    Subtyping,
    TypeRef,
    TypeTable,
    check_global_assumptions,
    combine_envs,
    combine_types,
    env_subtype,
    type_equiv,
)

ENGINE = Subtyping()


def T(text: str):
    return parse_type(text)


def table_of(source: str) -> TypeTable:
    return parse(source).types


@pytest.mark.unit
class TestSubtyping:
    """Entrada covariante, saída contravariante."""

    @pytest.mark.parametrize(
        "t, s",
        [
            ("?A", "?(A + B)"),
            ("!(A + B)", "!A"),
            ("?(A . B)", "?(B . A)"),
            ("!A*", "!A"),
            ("int", "int"),
            ("!m(?(A + B))", "!m(?A)"),
        ],
    )
    def test_subtype_holds(self, t: str, s: str):
        assert ENGINE.subtype(T(t), T(s))

    @pytest.mark.parametrize(
        "t, s",
        [
            ("?(A + B)", "?A"),
            ("!A", "!(A + B)"),
            ("?A", "!A"),
            ("int", "!1"),
            ("!m(?A)", "!m(?(A + B))"),
        ],
    )
    def test_subtype_fails(self, t: str, s: str):
        assert not ENGINE.subtype(T(t), T(s))

    def test_order_of_messages_is_irrelevant(self):
        """!(A·B) e !(B·A) são equivalentes."""
        assert type_equiv(T("!(A . B)"), T("!(B . A)"))

    def test_recursive_types_are_compared_coinductively(self):
        """Dois tipos recursivos com a mesma estrutura são equivalentes."""
        table = table_of("type S = !m(S)\ntype R = !m(R)")
        engine = Subtyping(table)

        assert engine.subtype(TypeRef("S"), TypeRef("R"))
        assert engine.subtype(TypeRef("R"), TypeRef("S"))

    def test_non_contractive_type_is_reported(self):
        """type X = Y, type Y = X não desdobra para um tipo estrutural."""
        table = table_of("type X = Y\ntype Y = X")

        with pytest.raises(NonContractiveError):
            table.resolve(TypeRef("X"))
        assert table.check_contractive()


@pytest.mark.unit
class TestClassification:
    """Relevante, confiável e utilizável."""

    @pytest.mark.parametrize(
        "text, relevant, reliable, usable",
        [
            ("!1", False, True, True),
            ("!A", True, True, True),
            ("?A", True, True, True),
            ("?0", True, False, True),
            ("!0", True, True, False),
            ("int", False, True, True),
        ],
    )
    def test_classify(self, text: str, relevant: bool, reliable: bool, usable: bool):
        flags = ENGINE.classify(T(text))

        assert flags.relevant is relevant
        assert flags.reliable is reliable
        assert flags.usable is usable

    def test_irrelevant_output_may_be_dropped(self):
        assert ENGINE.is_irrelevant(T("!A*"))


@pytest.mark.unit
class TestCombination:
    """τ ∥ σ e Γ ∥ Δ."""

    def test_outputs_accumulate(self):
        combined = combine_types(T("!A"), T("!B"), ENGINE)

        assert type_equiv(combined, T("!(A . B)"))

    def test_output_consumes_part_of_input(self):
        """!A ∥ ?(A·B) = ?B."""
        combined = combine_types(T("!A"), T("?(A . B)"), ENGINE)

        assert combined is not None
        assert type_equiv(combined, T("?B"))

    def test_single_output_against_star_input(self):
        """!result ∥ ?result* = ?result* (maior cofator não vazio)."""
        combined = combine_types(T("!result"), T("?result*"), ENGINE)

        assert combined is not None
        assert type_equiv(combined, T("?result*"))

    def test_two_inputs_are_undefined(self):
        """?A ∥ ?B nunca é definido."""
        assert combine_types(T("?A"), T("?B"), ENGINE) is None

    def test_int_combines_only_with_int(self):
        assert combine_types(INT, INT, ENGINE) == INT
        assert combine_types(INT, T("!A"), ENGINE) is None

    def test_combine_envs_is_pointwise(self):
        g = {"a": T("!A"), "b": T("?B")}
        d = {"a": T("?(A . C)"), "c": INT}

        combined = combine_envs(g, d, ENGINE)

        assert combined is not None
        assert set(combined) == {"a", "b", "c"}
        assert type_equiv(combined["a"], T("?C"))

    def test_env_subtype_drops_only_irrelevant_names(self):
        assert env_subtype({"a": T("?A"), "b": T("!1")}, {"a": T("?(A + B)")}, ENGINE)
        assert not env_subtype({"a": T("?A"), "b": T("!B")}, {"a": T("?A")}, ENGINE)


@pytest.mark.unit
class TestGlobalAssumptions:
    def test_unusable_type_is_reported(self):
        table = table_of("type Dead = !0")

        problems = check_global_assumptions(table)

        assert any("inutilizável" in p.problem for p in problems)

    def test_unreliable_argument_is_reported(self):
        table = table_of("type Bad = !m(?0)")

        problems = check_global_assumptions(table)

        assert any("não confiável" in p.problem for p in problems)

    def test_lock_types_satisfy_assumptions(self):
        table = table_of("type Owner = !reply(!release)\ntype Lock = ?acquire(Owner)*")

        assert check_global_assumptions(table) == []
