"""
Testes do checker: veredictos do corpus, diagnósticos pontuais, guards
mistos e a preservação de tipos ao longo da execução.
"""

import pytest

from mbxc.checker import check_process, check_program
from mbxc.encodings import corpus_entry
from mbxc.syntax import congruence_normal_form, parse, parse_process
from tests.exploration_metrics import timed_explore


def names_in(witness: str) -> set[str]:
    return {name.strip() for edge in witness.split(",") for name in edge.split("-")}


@pytest.mark.integration
class TestCorpusVerdicts:
    """Cada programa do corpus recebe o veredito do manifesto."""

    def test_verdict_matches_manifest(self, corpus_entry, corpus_program):
        report = check_program(corpus_program, mixed_guards=corpus_entry.mixed_guards)

        assert report.ok is corpus_entry.expects_ok, [str(d) for d in report.all_diagnostics]
        assert set(corpus_entry.codes) <= report.codes

    def test_default_rules_reject_mixed_guards(self, corpus_entry, corpus_program):
        """Sem --mixed-guards, quem depende deles é recusado com o código esperado."""
        if not corpus_entry.default_codes:
            pytest.skip("exemplo não depende de guards mistos")

        report = check_program(corpus_program)

        assert not report.ok
        assert set(corpus_entry.default_codes) <= report.codes

    def test_json_report_mirrors_verdict(self, corpus_entry, corpus_program):
        data = check_program(corpus_program, mixed_guards=corpus_entry.mixed_guards).to_dict()

        assert data["ok"] is corpus_entry.expects_ok
        assert data["mixed_guards"] is corpus_entry.mixed_guards


@pytest.mark.integration
class TestWorkedExamples:
    def test_lock_definitions_check_individually(self):
        report = check_program(corpus_entry("lock").load())

        for name in ("FreeLock", "BusyLock", "User", "main"):
            assert report.verdict(name).ok, report.verdict(name).to_dict()

    def test_future_deadlock_cycle_between_client_and_future(self):
        report = check_program(corpus_entry("future_deadlock").load())
        cycles = [d for d in report.all_diagnostics if d.code == "cycle"]

        assert cycles
        assert {"c", "f"} <= names_in(cycles[0].witness)

    def test_multiplicity_duplicates_edge(self):
        report = check_program(corpus_entry("multiplicity").load())
        cycles = [d for d in report.all_diagnostics if d.code == "cycle"]

        assert cycles
        assert names_in(cycles[0].witness) == {"a", "b"}

    def test_holes_block_checking(self):
        report = check_program(corpus_entry("lock_erased").load())

        assert report.codes == {"holes"}
        assert report.definitions == []

    @pytest.mark.parametrize("name", ["account", "account_future"])
    def test_account_continuations_are_narrowed(self, name: str):
        """?(debit*·credit* + stop): cada ramo recebe o resíduo do tipo declarado."""
        report = check_program(corpus_entry(name).load())

        assert report.ok, [str(d) for d in report.all_diagnostics]
        assert "nf-violation" not in report.codes

    def test_master_workers_pool_keeps_star_after_send(self):
        """!result ∥ ?result* resolve para ?result* em CreatePool."""
        entry = corpus_entry("master_workers")
        report = check_program(entry.load(), mixed_guards=entry.mixed_guards)

        assert report.verdict("CreatePool").ok, report.verdict("CreatePool").to_dict()
        assert "combination-unresolved" not in report.codes


@pytest.mark.unit
class TestDiagnostics:
    """Rejeições pontuais com o código estável esperado."""

    @pytest.mark.parametrize(
        "source, code",
        [
            ("main = new a in fail a", "new-unbalanced"),
            ("main = new a in (a!m | a!m | a?m.free a.done)", "new-unbalanced"),
            ("main = new a in a!m", "unknown-signature"),
            ("def P(x: ?m) = free x.done\nmain = done", "subtype"),
            ("def P(x: !m, y: !n) = x!m\nmain = done", "irrelevant-drop-failed"),
            ("def P(x: !m) = x!m(1)\nmain = done", "unknown-signature"),
            ("main = system!print_int(1) | system!other", "system-usage"),
            ("type Bad = !m(?0)\nmain = done", "global-assumption"),
        ],
    )
    def test_rejection_code(self, source: str, code: str):
        report = check_program(parse(source))

        assert not report.ok
        assert code in report.codes, [str(d) for d in report.all_diagnostics]

    def test_global_assumption_points_to_declaration(self):
        """Tipos nomeados e parâmetros de def indicam a linha da declaração."""
        named = check_program(parse("type Ok = !m\ntype Bad = !m(?0)\nmain = done"))
        param = check_program(parse("type Ok = !m\ndef P(x: !m(?0)) = done\nmain = done"))

        for report in (named, param):
            found = [d for d in report.all_diagnostics if d.code == "global-assumption"]
            assert found, [str(d) for d in report.all_diagnostics]
            assert all(d.pos is not None and d.pos[0] == 2 for d in found)

    def test_open_state_is_not_closed(self):
        """Um estado com entrada pendente em nome livre não fecha."""
        verdict = check_process(parse_process("b?m.free b.done"), parse(""))

        assert "not-closed" in verdict.codes

    def test_declared_graph_must_entail_synthesized(self):
        source = (
            "def P(x: !m(!1), y: !1) = x!m(y)\n"
            "main = done"
        )

        report = check_program(parse(source))

        assert "graph-entailment" in report.codes

    def test_simple_exchange_is_accepted(self):
        report = check_program(parse("main = new a in (a!m(1) | a?m(x: int).(system!print_int(x) | free a.done))"))

        assert report.ok, [str(d) for d in report.all_diagnostics]

    def test_optional_message_is_accepted_by_new(self):
        """O ⊑ I: o guard aceita mais do que é enviado."""
        report = check_program(parse("main = new a in (free a.done + a?m.free a.done)"))

        assert report.ok, [str(d) for d in report.all_diagnostics]

    def test_guard_not_in_normal_form_is_rejected(self):
        """Depois de ler b o guard libera a mailbox com a ainda pendente."""
        source = (
            "def P(x: ?(a . b + b)) = x?a.(x?b.free x.done) + x?b.free x.done\n"
            "main = done"
        )

        report = check_program(parse(source))

        assert not report.ok
        assert report.codes & {"nf-violation", "subtype"}


@pytest.mark.integration
class TestCongruenceInvariance:
    def test_normal_form_keeps_verdict(self, corpus_entry, corpus_program):
        if corpus_program.main is None or corpus_entry.has_holes:
            pytest.skip("sem main tipável")
        mixed = corpus_entry.mixed_guards

        original = check_process(corpus_program.main, corpus_program, mixed)
        normalized = check_process(congruence_normal_form(corpus_program.main), corpus_program, mixed)

        assert original.ok is normalized.ok


@pytest.mark.slow
@pytest.mark.integration
class TestSteadyState:
    """Programas aceitos: todo estado alcançável continua bem tipado, sem fail nem deadlock."""

    def test_every_reachable_state_checks(self, corpus_entry, corpus_program):
        if not corpus_entry.expects_ok:
            pytest.skip("só programas aceitos")
        graph = timed_explore(corpus_entry.name, corpus_program)
        assert graph.complete

        rejected = [
            key
            for key, state in graph.states.items()
            if not check_process(state, corpus_program, corpus_entry.mixed_guards).ok
        ]

        assert rejected == []
        assert graph.mailbox_conformant is True
        assert graph.deadlock_free is True

    @pytest.mark.parametrize("name", ["lock", "session", "choice"])
    def test_finitely_unfolding_programs_terminate(self, name: str):
        """Sem desdobramentos infinitos, todo caminho justo termina em done."""
        program = corpus_entry(name).load()
        graph = timed_explore(name, program)

        assert graph.complete
        assert graph.finitely_unfolding is True
        assert graph.fairly_terminating is True
