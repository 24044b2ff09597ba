"""
Testes do corpus: manifesto, carga dos exemplos e o comportamento em
execução que cada entrada declara.
"""

import json

import pytest

from mbxc.encodings import corpus_entry, load_manifest
from mbxc.errors import MbxcError
from mbxc.runtime import guards_on, mailbox_bounds, messages_in, run
from mbxc.syntax.ast import Free
from tests.exploration_metrics import timed_explore

SEEDS = range(5)


@pytest.mark.unit
class TestManifest:
    def test_every_file_exists(self, corpus_entry):
        assert corpus_entry.path.is_file()
        if corpus_entry.session is not None:
            assert corpus_entry.session.is_file()

    def test_error_entries_name_their_codes(self, corpus_entry):
        if not corpus_entry.expects_ok:
            assert corpus_entry.codes

    def test_unknown_entry(self):
        with pytest.raises(MbxcError, match="não está no corpus"):
            corpus_entry("inexistente")

    def test_invalid_verdict_is_rejected(self, tmp_path):
        (tmp_path / "manifest.json").write_text(
            json.dumps({"entries": [{"name": "x", "file": "x.mbx", "verdict": "talvez"}]}),
            encoding="utf-8",
        )

        with pytest.raises(MbxcError, match="veredito"):
            load_manifest(tmp_path)

    def test_missing_field_is_rejected(self, tmp_path):
        (tmp_path / "manifest.json").write_text(
            json.dumps({"entries": [{"name": "x", "verdict": "ok"}]}), encoding="utf-8"
        )

        with pytest.raises(MbxcError, match="file"):
            load_manifest(tmp_path)


@pytest.mark.slow
@pytest.mark.integration
class TestRuntimeExpectations:
    """A exploração completa encontra o que o manifesto promete."""

    def test_exploration(self, corpus_entry, corpus_program):
        expected = corpus_entry.runtime
        if expected is None:
            pytest.skip("sem expectativa de execução")

        graph = timed_explore(corpus_entry.name, corpus_program)

        if expected.fail is not None:
            assert (graph.mailbox_conformant is False) is expected.fail, graph.fail_witness
        if expected.deadlock is not None:
            assert (graph.deadlock_free is False) is expected.deadlock, graph.deadlocks[:3]
        if expected.terminates is not None:
            assert graph.complete
            assert graph.fairly_terminating is expected.terminates

    def test_prints(self, corpus_entry, corpus_program):
        expected = corpus_entry.runtime
        if expected is None or expected.prints is None:
            pytest.skip("saída não especificada")

        for seed in SEEDS:
            trace = run(corpus_program, seed=seed)
            assert trace.ends_in_done
            assert sorted(trace.outputs) == sorted(expected.prints)

    def test_bounds(self, corpus_entry, corpus_program):
        expected = corpus_entry.bounds
        if expected is None:
            pytest.skip("sem limite declarado")

        graph = timed_explore(corpus_entry.name, corpus_program)
        bounds = mailbox_bounds(corpus_program, graph, expected.mailbox)

        assert bounds.exact
        assert bounds.bounds.get(expected.tag, (0, 0))[1] <= expected.max


@pytest.mark.slow
@pytest.mark.integration
class TestLockMessages:
    def test_free_lock_holds_no_release(self):
        """Enquanto o guard de FreeLock está exposto, não há release pendente."""
        program = corpus_entry("lock").load()
        graph = timed_explore("lock", program)

        for key, state in graph.states.items():
            origins = graph.origins[key]
            guards = guards_on(state, "lock", origins)
            if any(isinstance(b, Free) for g in guards for b in g.branches):
                assert messages_in(state, "lock", origins).get("release", 0) == 0
