"""
Testes da codificação de sessões: dualidade, padrões E(·) e os
mediadores gerados.
"""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mbxc.checker import check_program
from mbxc.encodings import (
    END,
    ExtChoice,
    Fork,
    In,
    IntChoice,
    Join,
    Out,
    dual,
    encode_pattern,
    generate_session_process,
    parse_session,
    render,
)
from mbxc.errors import ParseError, SessionError
from mbxc.patterns import Atom, pattern_equiv
from mbxc.syntax import parse_pattern, print_definition
from mbxc.types import INT, Subtyping

REL = Subtyping().subtype

ALICE = "T = !int.!int.?int.end"


def sessions(max_leaves: int = 6):
    items = st.lists(
        st.builds(Atom, st.sampled_from(["a", "b", "c"]), st.just((INT,))),
        min_size=1,
        max_size=2,
        unique_by=lambda atom: atom.tag,
    ).map(tuple)
    return st.recursive(
        st.just(END),
        lambda inner: st.one_of(
            st.builds(In, st.just(INT), inner),
            st.builds(Out, st.just(INT), inner),
            st.builds(ExtChoice, inner, inner),
            st.builds(IntChoice, inner, inner),
            st.builds(Join, items, inner),
            st.builds(Fork, items, inner),
        ),
        max_leaves=max_leaves,
    )


@pytest.mark.unit
class TestDual:
    def test_dual_of_end(self):
        assert dual(END) == END

    def test_dual_of_client(self):
        spec = parse_session(ALICE)

        assert render(dual(spec.sessions["T"])) == "?int.?int.!int.end"

    def test_join_becomes_fork(self):
        items = (Atom("a", (INT,)),)

        assert dual(Join(items, END)) == Fork(items, END)

    @given(sessions())
    def test_dual_is_involutive(self, t):
        assert dual(dual(t)) == t


@pytest.mark.unit
class TestEncodePattern:
    """Equações de E(·)."""

    def test_end_is_unit(self):
        assert pattern_equiv(encode_pattern(END), parse_pattern("1"), REL)

    def test_input(self):
        encoded = encode_pattern(In(INT, END))

        assert pattern_equiv(encoded, parse_pattern("receive(!reply(int, !1))"), REL)

    def test_output(self):
        encoded = encode_pattern(Out(INT, END))

        assert pattern_equiv(encoded, parse_pattern("send(int, !reply(!1))"), REL)

    def test_fork_sends_every_message(self):
        items = (Atom("l1", (INT,)), Atom("l2", (INT,)))

        encoded = encode_pattern(Fork(items, END))

        expected = parse_pattern("send(!reply(!1)) . l1(int) . l2(int)")
        assert pattern_equiv(encoded, expected, REL)

    def test_external_choice(self):
        encoded = encode_pattern(ExtChoice(END, END))

        assert pattern_equiv(encoded, parse_pattern("receive(!(left(!1) + right(!1)))"), REL)


@pytest.mark.unit
class TestParseSession:
    def test_render_round_trip(self):
        spec = parse_session(ALICE)

        assert render(spec.sessions["T"]) == "!int.!int.?int.end"

    def test_recursive_session(self):
        spec = parse_session("Loop = ?int.Loop & end")

        assert spec.root == "Loop"

    @pytest.mark.parametrize(
        "text, error",
        [
            ("T = !int.", ParseError),
            ("T = S", SessionError),
            ("T = T", SessionError),
            ("T = join{a(int), a(T)};end", SessionError),
        ],
    )
    def test_malformed_sessions(self, text, error):
        with pytest.raises(error):
            parse_session(text)


@pytest.mark.integration
class TestGeneratedMediator:
    def test_end_session_just_frees(self):
        program = generate_session_process(END)

        text = print_definition(program.definitions["Session_T"])

        assert text.endswith("free self.done")

    def test_names_for_every_subsession(self):
        program = generate_session_process(parse_session(ALICE))

        assert {"T", "T_1", "T_2", "T_3", "coT", "coT_3"} <= set(program.types)
        assert {"Session_T", "Session_T_1", "Session_T_2", "Session_T_3"} <= set(
            program.definitions
        )

    def test_generated_definitions_check(self):
        program = generate_session_process(parse_session(ALICE))

        report = check_program(program)

        assert report.ok, [str(d) for d in report.all_diagnostics]
