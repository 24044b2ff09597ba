"""
Testes da linguagem de superfície: parsing, impressão, escopo e a
forma normal por congruência estrutural.
"""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mbxc.errors import ParseError
from mbxc.syntax import (
    DONE,
    Free,
    GuardedProcess,
    New,
    Par,
    Process,
    Receive,
    Send,
    Var,
    all_names,
    canonical_key,
    congruence_normal_form,
    did_you_mean,
    free_names,
    parse,
    parse_process,
    print_process,
    print_program,
    substitute,
)


@pytest.mark.unit
class TestParsing:
    """Texto → AST."""

    def test_bare_send_and_receive(self):
        p = parse_process("a!ping | a?ping.free a.done")

        assert isinstance(p, Par)
        assert p.left == Send("a", "ping", ())
        assert isinstance(p.right, GuardedProcess)
        assert isinstance(p.right.branches[0], Receive)

    def test_guard_sum_collects_branches(self):
        p = parse_process("a?m(x: int).done + free a.done + fail a")

        assert isinstance(p, GuardedProcess)
        assert len(p.branches) == 3

    def test_new_with_several_names_nests(self):
        p = parse_process("new a, b in done")

        assert isinstance(p, New) and p.name == "a"
        assert isinstance(p.body, New) and p.body.name == "b"

    def test_either_becomes_local_choice(self):
        """``either`` vira uma mailbox nova com uma mensagem e dois ramos."""
        p = parse_process("either {done} or {done}")

        assert isinstance(p, New)
        assert isinstance(p.body, Par)
        guard = p.body.right
        assert isinstance(guard, GuardedProcess)
        assert len(guard.branches) == 2

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as info:
            parse("def P(x: ?A) =\n    x?A.")

        issue = info.value.issues[0]
        assert issue.line == 2

    def test_summing_a_send_is_rejected(self):
        with pytest.raises(ParseError, match="somadas"):
            parse_process("a!m + free a.done")

    def test_redefinition_is_reported(self):
        with pytest.raises(ParseError, match="redefinido"):
            parse("type A = !m\ntype A = ?m")


@pytest.mark.unit
class TestScope:
    """Passagem de escopo e sugestões de nomes."""

    def test_undefined_process_suggests_similar_name(self):
        source = "def Worker(self: ?1) = free self.done\nmain = new w in Workr(w)"

        with pytest.raises(ParseError) as info:
            parse(source)

        assert "Workr" in str(info.value)
        assert "Worker" in str(info.value)

    def test_undefined_type_is_reported(self):
        with pytest.raises(ParseError, match="tipo não definido: Lok"):
            parse("type Lock = ?acquire*\ndef P(x: Lok) = free x.done")

    def test_arity_mismatch_is_reported(self):
        source = "def P(x: ?1) = free x.done\nmain = new a in P(a, a)"

        with pytest.raises(ParseError, match="aridade"):
            parse(source)

    def test_graph_must_cite_parameters(self):
        with pytest.raises(ParseError, match="não é parâmetro"):
            parse("def P(x: ?1) : [x-y] = free x.done")

    def test_repeated_binders_are_renamed(self):
        program = parse("main = new a in (a!m | a?m.free a.done) | new a in (a!m | a?m.free a.done)")
        text = print_process(program.main)

        assert "a'" in text

    @pytest.mark.parametrize(
        "name, candidates, expected",
        [
            ("Accont", ["Account", "Future"], "Account"),
            ("zzz", ["Account", "Future"], None),
            ("x", [], None),
        ],
    )
    def test_did_you_mean(self, name, candidates, expected):
        assert did_you_mean(name, candidates) == expected


@pytest.mark.unit
class TestNamesAndSubstitution:
    def test_free_names_skip_bound(self):
        p = parse_process("new a in (a!m(b) | c?n(x: !1).x!k)")

        assert free_names(p) == {"b", "c"}

    def test_substitution_avoids_capture(self):
        """P{b/a} não captura b quando ele é ligado dentro de P."""
        p = parse_process("new b in a!m(b)")

        result = substitute(p, {"a": "b"})

        assert isinstance(result, New)
        assert result.name != "b"
        assert result.body == Send("b", "m", (Var(result.name),))


@pytest.mark.unit
class TestCongruence:
    """P ≡ Q por forma normal canônica."""

    @pytest.mark.parametrize(
        "p, q",
        [
            ("a!m | b!n", "b!n | a!m"),
            ("a!m | done", "a!m"),
            ("new a in (a!m | b!n)", "b!n | new a in a!m"),
            ("new a in new b in (a!m | b!n)", "new b in new a in (b!n | a!m)"),
            ("a?m.done + b?n.done", "b?n.done + a?m.done"),
            ("a?m.done + fail a", "a?m.done"),
            (
                "new a, x, y in (a!a(x) | a!a(y) | x!k() | y!j())",
                "new a, x, y in (a!a(y) | a!a(x) | x!k() | y!j())",
            ),
        ],
    )
    def test_congruent_pairs(self, p: str, q: str):
        assert canonical_key(parse_process(p)) == canonical_key(parse_process(q))

    def test_distinct_processes_have_distinct_keys(self):
        assert canonical_key(parse_process("a!m")) != canonical_key(parse_process("a!n"))

    def test_done_alone(self):
        assert canonical_key(parse_process("done | done")) == canonical_key(DONE)


@pytest.mark.integration
class TestPrinting:
    """Impressão canônica reparseável."""

    def test_corpus_round_trip(self, corpus_program):
        """imprimir → parsear → imprimir é estável."""
        text = print_program(corpus_program)

        again = print_program(parse(text))

        assert again == text

    def test_printed_process_reparses_to_same_key(self):
        p = parse_process("new c in (c!m(1 + 2) | c?m(x: int).if x > 2 then free c.done else fail c)")

        assert canonical_key(parse_process(print_process(p))) == canonical_key(p)


NAMES = ["a", "b", "c"]


def sends():
    return st.builds(
        lambda target, tag, args: Send(target, tag, tuple(Var(x) for x in args)),
        st.sampled_from(NAMES),
        st.sampled_from(["m", "n"]),
        st.lists(st.sampled_from(NAMES), max_size=2),
    )


def guards():
    return st.builds(
        lambda name, tag, body: GuardedProcess((Receive(name, tag, (), body), Free(name, DONE))),
        st.sampled_from(NAMES),
        st.sampled_from(["m", "n"]),
        st.one_of(st.just(DONE), sends()),
    )


def processes(max_leaves: int = 6):
    return st.recursive(
        st.one_of(st.just(DONE), sends(), guards()),
        lambda inner: st.one_of(
            st.builds(Par, inner, inner),
            st.builds(New, st.sampled_from(NAMES), inner),
        ),
        max_leaves=max_leaves,
    )


def rewrite(p: Process, moves: list[int]) -> Process:
    """Aplica em cada nó o axioma de ≡ escolhido pelo próximo movimento."""
    move = moves.pop() if moves else 0
    match p:
        case Par(left, right):
            left, right = rewrite(left, moves), rewrite(right, moves)
            if move == 1:
                return Par(right, left)
            if move == 2 and isinstance(left, Par):
                return Par(left.left, Par(left.right, right))
            if move == 3 and isinstance(left, New) and left.name not in free_names(right):
                return New(left.name, Par(left.body, right))
            return Par(left, right)
        case New(name, body):
            body = rewrite(body, moves)
            if move == 1:
                taken = all_names(body) | {name}
                fresh = next(f"r{i}" for i in itertools.count() if f"r{i}" not in taken)
                return New(fresh, substitute(body, {name: fresh}))
            if move == 2:
                return Par(New(name, body), DONE)
            if move == 3 and isinstance(body, New) and body.name != name:
                return New(body.name, New(name, body.body))
            return New(name, body)
    if move == 1:
        return Par(DONE, p)
    return p


@pytest.mark.unit
class TestCongruenceProperties:
    """Propriedades da forma normal sobre processos aleatórios."""

    @given(processes())
    def test_normal_form_is_idempotent(self, p):
        once = congruence_normal_form(p)

        assert canonical_key(congruence_normal_form(once)) == canonical_key(once)
        assert canonical_key(once) == canonical_key(p)

    @given(processes(), st.lists(st.integers(0, 3), max_size=20))
    def test_key_survives_congruence_rewrites(self, p, moves):
        """Comutatividade, associatividade, done, alfa-conversão e extrusão de escopo."""
        assert canonical_key(rewrite(p, list(moves))) == canonical_key(p)

    @given(processes())
    def test_normal_form_preserves_free_names(self, p):
        assert free_names(congruence_normal_form(p)) == free_names(p)
