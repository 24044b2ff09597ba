"""
Testes da álgebra de padrões.

Inclusão e equivalência são conferidas contra o oráculo de força bruta
(configurações de tamanho limitado); as leis da álgebra de Kleene
comutativa são verificadas com hypothesis.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mbxc.errors import UndecidedError
from mbxc.patterns import (
    ONE,
    ZERO,
    Atom,
    AtomAlphabet,
    Hole,
    Multiset,
    Product,
    Star,
    Sum,
    WorkMeter,
    balance_residual,
    configurations_up_to,
    is_normal_form,
    largest_cofactor,
    matched_in,
    normal_form_violation,
    normalize,
    pattern_equiv,
    pattern_quotient,
    residual,
    simplify,
    subpattern,
)
from mbxc.patterns.oracle import brute_force_subpattern
from mbxc.syntax import parse_pattern
from mbxc.types import Subtyping

REL = Subtyping().subtype

A, B, C = Atom("A"), Atom("B"), Atom("C")


def P(text: str):
    return parse_pattern(text)


def small_patterns(max_leaves: int = 5):
    leaves = st.sampled_from([ZERO, ONE, A, B, C])
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(Sum, inner, inner),
            st.builds(Product, inner, inner),
            st.builds(Star, inner),
        ),
        max_leaves=max_leaves,
    )


@pytest.mark.unit
class TestInclusion:
    """Casos pontuais de E ⊑ F."""

    @pytest.mark.parametrize(
        "e, f",
        [
            ("A", "A + B"),
            ("A . B", "B . A"),
            ("0", "A"),
            ("1", "A*"),
            ("A . A", "A*"),
            ("A* . B*", "(A + B)*"),
            ("A . A*", "A*"),
            ("A*", "(A . A)* + A . (A . A)*"),
            ("(A . B)* . A*", "(A + B)*"),
        ],
    )
    def test_inclusion_holds(self, e: str, f: str):
        """Inclusões clássicas devem valer."""
        result = subpattern(P(e), P(f), REL)

        assert result.holds is True
        assert result.witness is None

    def test_star_not_included_in_plus(self):
        """A* ⋢ A·A*: a mailbox vazia é a testemunha."""
        result = subpattern(P("A*"), P("A . A*"), REL)

        assert not result
        assert result.witness == Multiset()
        assert str(result.witness) == "[]"

    def test_sum_not_included_in_summand(self):
        """A + B ⋢ A, com testemunha [B]."""
        result = subpattern(P("A + B"), P("A"), REL)

        assert not result
        assert result.witness == Multiset.of([B])

    def test_inclusion_respects_argument_subtyping(self):
        """Argumentos são comparados pela relação de subtipagem."""
        e = P("m(?A)")
        f = P("m(?(A + B))")

        assert subpattern(e, f, REL)
        assert not subpattern(f, e, REL)

    def test_exhausted_budget_is_undecided_not_accepted(self):
        with pytest.raises(UndecidedError):
            subpattern(P("(A . B)* . A*"), P("(A + B)*"), REL, WorkMeter(budget=1))

    def test_nested_star_stays_small(self):
        """((A + B)·A*)** fica com os termos de (A + B)*: vazio, só A, só B, ambos."""
        nested = Star(P("((A + B) . A*)*"))

        form = normalize(nested, AtomAlphabet(REL))

        assert len(form.terms) <= 4
        assert pattern_equiv(nested, P("(A + B)*"), REL)


@pytest.mark.unit
class TestEquivalence:
    """Leis de ≂ citadas nos exemplos."""

    @pytest.mark.parametrize(
        "e, f",
        [
            ("A . B", "B . A"),
            ("A + A", "A"),
            ("A*", "1 + A . A*"),
            ("(A*)*", "A*"),
            ("A . (B + C)", "A . B + A . C"),
            ("(A + B)*", "A* . B*"),
            ("A . 0", "0"),
        ],
    )
    def test_equivalent_pairs(self, e: str, f: str):
        """Pares equivalentes pela álgebra comutativa."""
        assert pattern_equiv(P(e), P(f), REL)

    def test_product_is_not_idempotent(self):
        """A·A ≄ A: multiplicidade importa."""
        assert not pattern_equiv(P("A . A"), P("A"), REL)


@pytest.mark.unit
class TestResidual:
    """Resíduo E / 𝕄."""

    def test_residual_example(self):
        """(A·C + B·A) / A ≂ B + C."""
        result = residual(P("A . C + B . A"), A, REL)

        assert result is not None
        assert pattern_equiv(result, P("B + C"), REL)

    def test_residual_of_star(self):
        """A* / A ≂ A*."""
        assert pattern_equiv(residual(P("A*"), A, REL), P("A*"), REL)

    def test_residual_without_the_message_is_zero(self):
        """B / A ≂ 𝟘."""
        assert pattern_equiv(residual(P("B"), A, REL), ZERO, REL)

    def test_residual_rejects_holes(self):
        """Variáveis de padrão não têm resíduo."""
        with pytest.raises(ValueError):
            residual(Product(Hole("_x"), A), A, REL)


@pytest.mark.unit
class TestNormalForm:
    """Forma normal de guards."""

    @pytest.mark.parametrize(
        "text",
        [
            "1 + acquire . acquire* + release . 0",
            "A . B + B . A",
            "1",
            "0",
        ],
    )
    def test_normal_forms(self, text: str):
        """Padrões em que cada continuação é o resíduo do seu prefixo."""
        assert is_normal_form(P(text), REL)
        assert normal_form_violation(P(text), REL) is None

    def test_prefix_with_smaller_continuation_is_not_normal(self):
        """A·B + A: o resíduo por A é B + 1, não B."""
        problem = normal_form_violation(P("A . B + A"), REL)

        assert problem is not None
        assert not is_normal_form(P("A . B + A"), REL)


@pytest.mark.unit
class TestCofactor:
    """Maior D com O·D ⊑ I."""

    def test_cofactor_of_single_message(self):
        """release · acquire* deixa acquire* depois de release."""
        d = largest_cofactor(P("release . acquire*"), P("release"), REL)

        assert d is not None
        assert pattern_equiv(d, P("acquire*"), REL)

    def test_cofactor_absent_when_outputs_exceed_inputs(self):
        """Não há D com B·D ⊑ A."""
        d = largest_cofactor(P("A"), P("B"), REL)

        assert d is None or pattern_equiv(d, ZERO, REL)

    def test_quotient_of_star_by_itself(self):
        """read* ∥ ?read* deixa ?read*."""
        q = pattern_quotient(P("read*"), P("read*"), REL)

        assert q is not None
        assert pattern_equiv(q, P("read*"), REL)

    def test_balance_falls_back_to_cofactor(self):
        """!result ∥ ?result* não tem quociente exato, mas deixa ?result*."""
        assert pattern_quotient(P("result*"), P("result"), REL) is None

        rest = balance_residual(P("result*"), P("result"), REL)

        assert rest is not None
        assert pattern_equiv(rest, P("result*"), REL)

    def test_balance_rejects_empty_cofactor(self):
        assert balance_residual(P("A"), P("B"), REL) is None


@pytest.mark.unit
class TestSimplify:
    def test_units_disappear(self):
        assert simplify(P("1 . A + 0")) == A

    def test_star_of_unit(self):
        assert simplify(Star(ONE)) == ONE


@pytest.mark.slow
class TestOracleAgreement:
    """A decisão semilinear concorda com a enumeração de configurações."""

    @settings(max_examples=150)
    @given(small_patterns(), small_patterns())
    def test_inclusion_agrees_with_brute_force(self, e, f):
        """Inclusão verdadeira não tem contraexemplo pequeno; falsa traz testemunha real."""
        result = subpattern(e, f, REL)

        if result.holds:
            assert brute_force_subpattern(e, f, 4, REL) is None
        else:
            witness = result.witness
            size = len(witness)
            assert matched_in(witness, configurations_up_to(e, size), REL)
            assert not matched_in(witness, configurations_up_to(f, size), REL)


@pytest.mark.slow
class TestKleeneLaws:
    """Leis de álgebra de Kleene comutativa em padrões aleatórios pequenos."""

    @given(small_patterns(), small_patterns())
    def test_sum_and_product_commute(self, e, f):
        assert pattern_equiv(Sum(e, f), Sum(f, e), REL)
        assert pattern_equiv(Product(e, f), Product(f, e), REL)

    @given(small_patterns(4), small_patterns(4), small_patterns(4))
    def test_product_distributes_over_sum(self, e, f, g):
        assert pattern_equiv(Product(e, Sum(f, g)), Sum(Product(e, f), Product(e, g)), REL)

    @given(small_patterns())
    def test_idempotency_and_star(self, e):
        assert pattern_equiv(Sum(e, e), e, REL)
        assert pattern_equiv(Star(Star(e)), Star(e), REL)
        assert subpattern(ONE, Star(e), REL)
        assert subpattern(e, e, REL)

    @given(small_patterns(), small_patterns())
    def test_summand_is_included(self, e, f):
        assert subpattern(e, Sum(e, f), REL)

    @given(small_patterns(4))
    def test_star_unfolds(self, e):
        assert pattern_equiv(Star(e), Sum(ONE, Product(e, Star(e))), REL)
