"""Hooks e fixtures compartilhados para a suíte de testes."""

import pytest
from hypothesis import HealthCheck, settings

from mbxc.encodings import load_manifest
from tests.exploration_metrics import EXPLORATION_STATS

settings.register_profile(
    "ci",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=False,
    print_blob=True,
)
settings.load_profile("ci")

CORPUS = load_manifest()


@pytest.fixture(params=CORPUS, ids=[e.name for e in CORPUS])
def corpus_entry(request):
    """Cada entrada do manifesto do corpus."""
    return request.param


@pytest.fixture
def corpus_program(corpus_entry):
    return corpus_entry.load()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Exibe o placar de exploração do corpus ao final da execução."""

    if not EXPLORATION_STATS:
        return

    ordered = sorted(EXPLORATION_STATS.items(), key=lambda item: item[1].time)

    terminalreporter.write_sep("-", "Exploração do corpus")

    for name, stats in ordered:
        marker = "" if stats.complete else "  (truncado)"
        terminalreporter.write_line(
            f"{name:20s} | estados {stats.states:6d} | arestas {stats.edges:6d} | "
            f"{stats.time * 1000:9.2f} ms{marker}"
        )

    mais_lento = ordered[-1][0]
    terminalreporter.write_line(f"Mais lento da rodada: {mais_lento}")
