"""Utilitários para medir a exploração dos programas do corpus."""

import time
from dataclasses import dataclass

from mbxc.runtime import StateGraph, explore
from mbxc.syntax.ast import Program


@dataclass
class ExplorationStats:
    states: int = 0
    edges: int = 0
    time: float = 0.0
    complete: bool = True


EXPLORATION_STATS: dict[str, ExplorationStats] = {}

_GRAPHS: dict[str, StateGraph] = {}


def timed_explore(name: str, program: Program, **bounds) -> StateGraph:
    """Explora uma vez por nome e guarda o placar; chamadas seguintes reusam o grafo."""
    if name in _GRAPHS:
        return _GRAPHS[name]

    start = time.perf_counter()
    graph = explore(program, **bounds)
    duration = time.perf_counter() - start

    EXPLORATION_STATS[name] = ExplorationStats(
        states=len(graph.states),
        edges=graph.edge_count,
        time=duration,
        complete=graph.complete,
    )
    _GRAPHS[name] = graph
    return graph
