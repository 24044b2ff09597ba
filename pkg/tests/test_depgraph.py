"""
Testes dos grafos de dependência: aciclicidade com multiplicidade,
relação de dependência, implicação e substituição.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mbxc.depgraph import (
    EMPTY,
    Edge,
    Restrict,
    acyclic,
    entails,
    find_cycle,
    free_names,
    grel,
    literal_relation,
    restrict,
    substitute_graph,
    to_text,
    union,
)
from mbxc.syntax import parse_graph


def pair(u: str, v: str) -> frozenset[str]:
    return frozenset({u, v})


@pytest.mark.unit
class TestAcyclicity:
    def test_single_edge_is_acyclic(self):
        assert acyclic(Edge("a", "b"))

    def test_repeated_edge_is_a_cycle(self):
        """{a–b} ⊔ {a–b} tem duas arestas entre os mesmos nomes."""
        graph = union(Edge("a", "b"), Edge("a", "b"))

        assert not acyclic(graph)
        assert find_cycle(graph) is not None

    def test_self_loop_is_a_cycle(self):
        assert not acyclic(Edge("a", "a"))
        assert find_cycle(Edge("a", "a")) == [("a", "a")]

    def test_triangle_through_restriction(self):
        """O ciclo passa por um nome restrito e continua sendo ciclo."""
        graph = parse_graph("a-b, new x. {x-a, x-b}")

        assert not acyclic(graph)

    def test_distinct_restrictions_do_not_share_vertices(self):
        """(νx)(x–a) ⊔ (νx)(x–a) são dois x diferentes: floresta."""
        graph = union(Restrict("x", Edge("x", "a")), Restrict("x", Edge("x", "a")))

        assert acyclic(graph)

    def test_multiplicity_substitution_creates_cycle(self):
        """Identificar a e c em {a–b, b–c} fecha um ciclo."""
        graph = parse_graph("a-b, b-c")

        assert acyclic(graph)
        assert not acyclic(substitute_graph(graph, {"c": "a"}))


@pytest.mark.unit
class TestDependencyRelation:
    def test_path_relates_endpoints(self):
        relation = grel(parse_graph("a-b, b-c"))

        assert pair("a", "c") in relation
        assert pair("a", "a") not in relation

    def test_restricted_names_are_hidden(self):
        relation = grel(parse_graph("new x. {x-a, x-b}"))

        assert relation == {pair("a", "b")}

    def test_cycle_gives_reflexive_pairs(self):
        relation = grel(union(Edge("a", "b"), Edge("b", "a")))

        assert pair("a", "a") in relation
        assert pair("b", "b") in relation

    def test_entails(self):
        phi = parse_graph("a-b, b-c")

        assert entails(phi, Edge("a", "c"))
        assert entails(phi, EMPTY)
        assert not entails(Edge("a", "b"), phi)


@pytest.mark.unit
class TestSyntax:
    def test_restrict_drops_unused_binder(self):
        assert restrict("x", Edge("a", "b")) == Edge("a", "b")

    def test_free_names(self):
        assert free_names(parse_graph("a-b; new x. x-c")) == {"a", "b", "c"}

    def test_text_round_trip(self):
        graph = parse_graph("a-b, new x. {x-a, x-b}")

        assert parse_graph(to_text(graph)) == graph

    def test_substitution_renews_clashing_binder(self):
        graph = Restrict("x", Edge("x", "a"))

        renamed = substitute_graph(graph, {"a": "x"})

        assert isinstance(renamed, Restrict)
        assert renamed.name != "x"
        assert renamed.body == Edge(renamed.name, "x")


NAMES = st.sampled_from(["a", "b", "c", "x"])


def graphs(max_leaves: int = 5):
    edges = st.builds(Edge, NAMES, NAMES)
    return st.recursive(
        edges,
        lambda inner: st.one_of(
            st.builds(union, inner, inner),
            st.builds(Restrict, st.just("x"), inner),
        ),
        max_leaves=max_leaves,
    )


@pytest.mark.slow
class TestLiteralOracle:
    """A forma achatada concorda com as regras aplicadas literalmente."""

    @given(graphs())
    def test_relation_matches_literal_transitions(self, graph):
        assert grel(graph) == literal_relation(graph)
