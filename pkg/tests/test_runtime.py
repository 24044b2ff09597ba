"""
Testes da semântica operacional: passos de redução, exploração e
execução reprodutível.
"""

import pytest

from mbxc.encodings import corpus_entry
from mbxc.errors import MbxcError
from mbxc.runtime import (
    R_DEF,
    R_FREE,
    R_IF,
    R_PRINT,
    R_READ,
    explore,
    find_unguarded_fail,
    mailbox_bounds,
    messages_in,
    run,
    step,
)
from mbxc.syntax import canonical_key, parse, parse_process
from tests.exploration_metrics import timed_explore


def rules_of(p: str, program_text: str = "") -> set[str]:
    program = parse(program_text)
    return {rule for rule, _ in step(parse_process(p), program)}


@pytest.mark.unit
class TestStep:
    """Uma redução por regra."""

    def test_read_consumes_matching_message(self):
        program = parse("")
        (rule, target), = step(parse_process("a!m(5) | a?m(x: int).system!print_int(x)"), program)

        assert rule == R_READ
        assert canonical_key(target) == canonical_key(parse_process("system!print_int(5)"))

    def test_free_needs_no_other_reference(self):
        assert rules_of("new a in free a.done") == {R_FREE}
        assert rules_of("new a in (free a.done | a!m)") == set()

    def test_definition_unfolds(self):
        assert rules_of("P(a)", "def P(x: !m) = x!m") == {R_DEF}

    def test_conditional_picks_branch(self):
        program = parse("")
        (rule, target), = step(parse_process("if 1 < 2 then a!yes else a!no"), program)

        assert rule == R_IF
        assert canonical_key(target) == canonical_key(parse_process("a!yes"))

    def test_print_consumes_console_message(self):
        assert rules_of("system!print_int(7)") == {R_PRINT}

    def test_wrong_tag_does_not_read(self):
        assert rules_of("a!n | a?m.done") == set()

    def test_messages_are_unordered(self):
        """Duas mensagens na mesma mailbox podem ser lidas em qualquer ordem."""
        program = parse("")
        p = parse_process("a!m(1) | a!m(2) | a?m(x: int).system!print_int(x)")

        assert len(step(p, program)) == 2


@pytest.mark.unit
class TestUnguardedFail:
    def test_exposed_fail(self):
        assert find_unguarded_fail(parse_process("a!m | fail a")) == "a"

    def test_fail_with_alternative_is_not_exposed(self):
        assert find_unguarded_fail(parse_process("a?m.done + fail a")) is None

    def test_fail_under_prefix_is_not_exposed(self):
        assert find_unguarded_fail(parse_process("b?m.fail a")) is None


@pytest.mark.unit
class TestExplore:
    def test_deadlock_is_detected(self):
        program = parse("main = new a in a?m.free a.done")

        graph = explore(program)

        assert graph.complete
        assert graph.deadlock_free is False
        assert graph.fairly_terminating is False

    def test_fail_has_witness_path(self):
        program = parse("main = new a in (a!stop | (a?stop.fail a + free a.done))")

        graph = explore(program)

        assert graph.mailbox_conformant is False
        assert graph.fail_witness[0] == graph.initial

    def test_truncation_is_reported_not_raised(self):
        program = parse("def Loop(x: !tick*) = x!tick | Loop(x)\nmain = new a in Loop(a)")

        graph = explore(program, max_states=20, max_depth=50)

        assert graph.truncated
        assert graph.deadlock_free is None
        assert graph.fairly_terminating is None

    def test_terminal_states_at_depth_limit_are_classified(self):
        """done e deadlock alcançados no limite não truncam o grafo."""
        finishes = parse("main = new a in (a!m | a?m.free a.done)")
        blocks = parse("main = new a, b in (a!m | a?m.free a.(b?n.free b.done))")

        done_graph = explore(finishes, max_depth=2)
        stuck_graph = explore(blocks, max_depth=2)

        assert done_graph.complete
        assert done_graph.fairly_terminating is True
        assert stuck_graph.complete
        assert stuck_graph.deadlock_free is False

    def test_invalid_limits(self):
        with pytest.raises(ValueError):
            explore(parse("main = done"), max_states=0)

    def test_program_without_main(self):
        with pytest.raises(MbxcError, match="main"):
            explore(parse("type A = !m"))

    def test_to_dict_summary(self):
        data = explore(parse("main = system!print_int(1)")).to_dict()

        assert data["complete"] is True
        assert data["deadlock_free"] is True
        assert data["fail_witness"] is None


@pytest.mark.integration
class TestMailboxBounds:
    def test_lock_never_holds_two_releases(self):
        """Com dois clientes, no máximo um release fica pendente."""
        program = corpus_entry("lock").load()
        graph = timed_explore("lock", program)

        bounds = mailbox_bounds(program, graph, "lock")

        assert bounds.exact
        assert bounds.bounds["release"][1] <= 1
        assert bounds.bounds["acquire"][1] <= 2

    def test_messages_in_counts_by_tag(self):
        p = parse_process("a!m | a!m | a!n | b!m")

        assert messages_in(p, "a") == {"m": 2, "n": 1}


@pytest.mark.unit
class TestRun:
    def test_same_seed_same_trace(self):
        program = parse("main = either { system!print_int(1) } or { system!print_int(2) }")

        first = run(program, seed=7)
        second = run(program, seed=7)

        assert first.outputs == second.outputs
        assert [s.redex for s in first.steps] == [s.redex for s in second.steps]

    def test_run_ends_in_done(self):
        trace = run(parse("main = system!print_int(3) | system!print_int(4)"), seed=1)

        assert trace.ends_in_done
        assert sorted(trace.outputs) == [3, 4]

    def test_run_is_truncated_on_infinite_program(self):
        program = parse("def Loop(x: !tick*) = x!tick | Loop(x)\nmain = new a in Loop(a)")

        trace = run(program, seed=0, max_steps=15)

        assert trace.truncated
        assert len(trace) == 15
        assert not trace.ends_in_done
