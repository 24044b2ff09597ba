"""
Testes da geração de restrições para programas com padrões apagados.
"""

import pytest

from mbxc.checker import check_solution, generate_constraints
from mbxc.encodings import corpus_entry
from mbxc.syntax import parse, parse_pattern

LOCK_HOLES = {"_free", "_busy", "_owner", "_reply", "_user", "_lockref", "_rel"}


@pytest.fixture(scope="module")
def erased():
    return corpus_entry("lock_erased")


@pytest.fixture(scope="module")
def constraints(erased):
    return generate_constraints(erased.load())


@pytest.mark.integration
class TestLockErased:
    """O lock sem padrões: restrições geradas e a solução conhecida."""

    def test_holes_are_the_unknowns(self, constraints):
        assert set(constraints.holes) == LOCK_HOLES

    def test_constraints_are_rendered_with_rule(self, constraints):
        lines = constraints.lines()

        assert len(lines) == len(constraints) > 0
        assert all(line.startswith("[") for line in lines)
        assert sum(constraints.by_rule().values()) == len(constraints)

    def test_known_solution_satisfies_everything(self, erased, constraints):
        problems = check_solution(constraints, erased.solution_patterns())

        assert problems == []

    def test_missing_hole_is_reported(self, erased, constraints):
        assignment = erased.solution_patterns()
        del assignment["_user"]

        problems = check_solution(constraints, assignment)

        assert any(p.startswith("_user") for p in problems)

    def test_wrong_solution_is_rejected(self, erased, constraints):
        """Um lock livre que já espera um release não casa com o guard."""
        assignment = erased.solution_patterns()
        assignment["_free"] = parse_pattern("acquire(!reply(!release))* . release")

        assert check_solution(constraints, assignment) != []


@pytest.mark.unit
class TestSmallPrograms:
    def test_program_without_holes_has_no_unknowns(self):
        constraints = generate_constraints(
            parse("main = new a in (a!m | a?m.free a.done)")
        )

        assert constraints.holes == []
        assert check_solution(constraints, {}) == []

    def test_hole_in_parameter_becomes_unknown(self):
        constraints = generate_constraints(parse("def P(x: ?_p) = free x.done"))

        assert constraints.holes == ["_p"]
        assert check_solution(constraints, {"_p": parse_pattern("1")}) == []
        assert check_solution(constraints, {"_p": parse_pattern("m")}) != []
