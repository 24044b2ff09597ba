"""
Testes da interface de linha de comando: códigos de saída e formatos.
"""

import json

import pytest

from mbxc.cli import main
from mbxc.config import CORPUS_DIR
from mbxc.encodings import corpus_entry


def corpus(name: str) -> str:
    return str(CORPUS_DIR / name)


@pytest.mark.integration
class TestCheck:
    def test_well_typed_program(self, capsys):
        assert main(["check", corpus("lock.mbx")]) == 0
        assert "bem tipado" in capsys.readouterr().out

    def test_deadlocking_program_reports_cycle(self, capsys):
        assert main(["check", corpus("future_deadlock.mbx")]) == 1
        assert "[cycle]" in capsys.readouterr().err

    def test_json_output(self, capsys):
        assert main(["check", corpus("future.mbx"), "--json"]) == 0

        data = json.loads(capsys.readouterr().out)
        assert data["ok"] is True
        assert {d["name"] for d in data["definitions"]} >= {"Future", "Present", "main"}

    def test_mixed_guards_flag(self):
        assert main(["check", corpus("readers_writer.mbx")]) == 1
        assert main(["check", corpus("readers_writer.mbx"), "--mixed-guards"]) == 0

    def test_session_prelude(self):
        args = ["check", corpus("session.mbx"), "--session", corpus("session.st")]

        assert main(args) == 0


@pytest.mark.unit
class TestPatternQueries:
    def test_inclusion_false_prints_empty_witness(self, capsys):
        assert main(["pat", "include", "A*", "A.A*"]) == 1
        assert "testemunha: []" in capsys.readouterr().out

    def test_inclusion_true(self):
        assert main(["pat", "include", "A.A*", "A*"]) == 0

    def test_residual(self, capsys):
        assert main(["pat", "residual", "A . C + B . A", "A"]) == 0
        assert capsys.readouterr().out.strip()

    def test_normal_form(self):
        assert main(["pat", "nf", "A . B + B . A"]) == 0
        assert main(["pat", "nf", "A . B + A"]) == 1

    def test_subtyping(self):
        assert main(["ty", "sub", "?A", "?(A + B)"]) == 0
        assert main(["ty", "sub", "?(A + B)", "?A"]) == 1

    def test_classify_json(self, capsys):
        assert main(["ty", "classify", "!1", "--json"]) == 0

        data = json.loads(capsys.readouterr().out)
        assert data["relevant"] is False


@pytest.mark.integration
class TestRuntimeCommands:
    def test_run_prints_value(self, capsys):
        assert main(["run", corpus("future.mbx"), "--seed", "3"]) == 0
        assert "42" in capsys.readouterr().out

    def test_explore_finds_deadlock(self, capsys):
        assert main(["explore", corpus("account_deadlock.mbx"), "--json"]) == 1

        data = json.loads(capsys.readouterr().out)
        assert data["deadlock_free"] is False

    def test_explore_bounds(self, capsys):
        assert main(["explore", corpus("lock.mbx"), "--bound", "lock", "--json"]) == 0

        data = json.loads(capsys.readouterr().out)
        assert data["bounds"][0]["mailbox"] == "lock"


@pytest.mark.integration
class TestTooling:
    def test_encode_session_to_file(self, tmp_path):
        target = tmp_path / "session_gen.mbx"

        assert main(["encode-session", corpus("session.st"), "-o", str(target)]) == 0
        assert "def Session_T(" in target.read_text(encoding="utf-8")

    def test_constraints_with_solution(self, tmp_path):
        solution = tmp_path / "solution.json"
        solution.write_text(json.dumps(corpus_entry("lock_erased").solution), encoding="utf-8")

        assert main(["constraints", corpus("lock_erased.mbx"), "--solution", str(solution)]) == 0

    def test_fmt_check(self, tmp_path, capsys):
        source = tmp_path / "p.mbx"
        source.write_text("main = new a in (a!m() | a?m().free a.done)", encoding="utf-8")

        assert main(["fmt", str(source)]) == 0
        formatted = capsys.readouterr().out
        source.write_text(formatted, encoding="utf-8")
        assert main(["fmt", str(source), "--check"]) == 0


@pytest.mark.unit
class TestErrors:
    def test_missing_file(self):
        assert main(["check", "nao_existe.mbx"]) == 2

    def test_syntax_error(self, tmp_path, capsys):
        source = tmp_path / "bad.mbx"
        source.write_text("main = new in", encoding="utf-8")

        assert main(["check", str(source)]) == 2
        assert "ERRO" in capsys.readouterr().err

    def test_unknown_command(self):
        assert main(["voar"]) == 2

    def test_help(self):
        assert main(["--help"]) == 0
