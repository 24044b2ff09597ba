"""
Exploração exaustiva (BFS) do espaço de estados de um programa.

Estados são identificados pela impressão canônica da forma normal. O
grafo resultante responde às três propriedades comportamentais:
conformidade de mailbox (nenhum ``fail`` exposto), ausência de deadlock
(todo estado irredutível é ``done``) e terminação justa (todo estado
alcança ``done``).
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

from mbxc.config import MAX_DEPTH, MAX_STATES
from mbxc.errors import MbxcError
from mbxc.syntax.ast import DONE, GuardedProcess, Process, Program, Send
from mbxc.syntax.congruence import nf_parts, normal_form, shape

from .reduction import R_DEF, find_unguarded_fail, transitions

logger = logging.getLogger(__name__)

DONE_KEY = shape(DONE)


class Classification(str, Enum):
    TERMINAL_DONE = "terminal-done"
    DEADLOCK = "deadlock"
    LIVE = "live"
    UNEXPLORED = "unexplored"


@dataclass(frozen=True)
class StateEdge:
    rule: str
    redex: str
    target: str
    printed: int | None = None


@dataclass
class StateGraph:
    """Grafo de estados alcançáveis a partir de ``main``."""

    initial: str
    states: dict[str, Process] = field(default_factory=dict)
    origins: dict[str, dict[str, str]] = field(default_factory=dict)
    edges: dict[str, list[StateEdge]] = field(default_factory=dict)
    classification: dict[str, Classification] = field(default_factory=dict)
    depth: dict[str, int] = field(default_factory=dict)
    parents: dict[str, str | None] = field(default_factory=dict)
    fail_states: dict[str, str] = field(default_factory=dict)
    complete: bool = True

    @property
    def truncated(self) -> bool:
        return not self.complete

    @property
    def edge_count(self) -> int:
        return sum(len(out) for out in self.edges.values())

    def of_class(self, kind: Classification) -> list[str]:
        return [k for k, c in self.classification.items() if c is kind]

    @property
    def deadlocks(self) -> list[str]:
        return self.of_class(Classification.DEADLOCK)

    @property
    def fail_witness(self) -> list[str] | None:
        """Caminho (chaves) do estado inicial até o primeiro ``fail`` exposto."""
        if not self.fail_states:
            return None
        target = min(self.fail_states, key=lambda k: (self.depth[k], k))
        return self.path_to(target)

    def path_to(self, key: str) -> list[str]:
        path = [key]
        while (parent := self.parents.get(path[-1])) is not None:
            path.append(parent)
        return list(reversed(path))

    @cached_property
    def reaching_done(self) -> frozenset[str]:
        """Estados que alcançam ``done``."""
        incoming: dict[str, list[str]] = {k: [] for k in self.states}
        for source, out in self.edges.items():
            for edge in out:
                incoming[edge.target].append(source)
        frontier = deque(self.of_class(Classification.TERMINAL_DONE))
        seen = set(frontier)
        while frontier:
            for source in incoming[frontier.popleft()]:
                if source not in seen:
                    seen.add(source)
                    frontier.append(source)
        return frozenset(seen)

    @property
    def mailbox_conformant(self) -> bool | None:
        if self.fail_states:
            return False
        return True if self.complete else None

    @property
    def deadlock_free(self) -> bool | None:
        if self.deadlocks:
            return False
        return True if self.complete else None

    @property
    def fairly_terminating(self) -> bool | None:
        """Todo estado alcança ``done``; None quando o grafo foi truncado."""
        if not self.complete:
            return None
        return len(self.reaching_done) == len(self.states)

    @property
    def finitely_unfolding(self) -> bool | None:
        """Nenhuma aresta ``r-def`` dentro de um ciclo; None quando truncado."""
        if not self.complete:
            return None
        component = _strongly_connected(self.states, self.edges)
        return not any(
            edge.rule == R_DEF and component[source] == component[edge.target]
            for source, out in self.edges.items()
            for edge in out
        )

    def to_dict(self) -> dict:
        counts = Counter(c.value for c in self.classification.values())
        witness = self.fail_witness
        return {
            "complete": self.complete,
            "states": len(self.states),
            "edges": self.edge_count,
            "classification": dict(sorted(counts.items())),
            "mailbox_conformant": self.mailbox_conformant,
            "deadlock_free": self.deadlock_free,
            "fairly_terminating": self.fairly_terminating,
            "finitely_unfolding": self.finitely_unfolding,
            "deadlocks": sorted(self.deadlocks)[:5],
            "fail_witness": witness,
        }


def _strongly_connected(
    states: Mapping[str, Process], edges: Mapping[str, list[StateEdge]]
) -> dict[str, int]:
    """Tarjan iterativo: estado → índice da componente."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    component: dict[str, int] = {}
    counter = 0
    for root in states:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, position = work.pop()
            if position == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            successors = [e.target for e in edges.get(node, [])]
            for i in range(position, len(successors)):
                nxt = successors[i]
                if nxt not in index:
                    work.append((node, i + 1))
                    work.append((nxt, 0))
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            else:
                if low[node] == index[node]:
                    while True:
                        member = stack.pop()
                        on_stack.discard(member)
                        component[member] = index[node]
                        if member == node:
                            break
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
    return component


def initial_state(program: Program) -> tuple[Process, dict[str, str]]:
    if program.main is None:
        raise MbxcError("o programa não tem main")
    return normal_form(program.main)


def explore(
    program: Program, max_states: int = MAX_STATES, max_depth: int = MAX_DEPTH
) -> StateGraph:
    """BFS sobre estados canônicos; truncamento é relatado, nunca é erro."""
    if max_states < 1 or max_depth < 1:
        raise ValueError("max_states e max_depth devem ser ≥ 1")
    start, origins = initial_state(program)
    key = shape(start)
    graph = StateGraph(initial=key)
    graph.states[key] = start
    graph.origins[key] = origins
    graph.depth[key] = 0
    graph.parents[key] = None
    queue = deque([key])

    while queue:
        current = queue.popleft()
        state = graph.states[current]
        failing = find_unguarded_fail(state)
        if failing is not None:
            graph.fail_states[current] = failing
        moves = transitions(state, program, graph.origins[current])
        # estados terminais são classificados mesmo no limite de profundidade
        if moves and graph.depth[current] >= max_depth:
            graph.classification[current] = Classification.UNEXPLORED
            graph.complete = False
            continue
        graph.edges[current] = []
        for move in moves:
            if move.key not in graph.states:
                if len(graph.states) >= max_states:
                    graph.complete = False
                    continue
                graph.states[move.key] = move.target
                graph.origins[move.key] = dict(move.origins)
                graph.depth[move.key] = graph.depth[current] + 1
                graph.parents[move.key] = current
                queue.append(move.key)
                if len(graph.states) % 1000 == 0:
                    logger.debug("🔍 %d estados explorados", len(graph.states))
            graph.edges[current].append(
                StateEdge(move.rule, move.redex, move.key, move.printed)
            )
        if current == DONE_KEY:
            graph.classification[current] = Classification.TERMINAL_DONE
        elif not moves:
            graph.classification[current] = Classification.DEADLOCK
        else:
            graph.classification[current] = Classification.LIVE

    for leftover in graph.states:
        graph.classification.setdefault(leftover, Classification.UNEXPLORED)
    logger.info(
        "✅ exploração: %d estados, %d arestas, completa=%s",
        len(graph.states),
        graph.edge_count,
        graph.complete,
    )
    return graph


# ---------------------------------------------------------------------------
# Contagem de mensagens
# ---------------------------------------------------------------------------


def _instances(state: Process, mailbox: str, origins: Mapping[str, str]) -> list[str]:
    binders, components = nf_parts(state)
    names = {n for n in binders if n == mailbox or origins.get(n) == mailbox}
    for c in components:
        if isinstance(c, Send) and c.target == mailbox:
            names.add(mailbox)
    return sorted(names)


def _counts(state: Process, name: str) -> Counter[str]:
    _, components = nf_parts(state)
    return Counter(c.tag for c in components if isinstance(c, Send) and c.target == name)


def messages_in(
    state: Process, mailbox: str, origins: Mapping[str, str] | None = None
) -> dict[str, int]:
    """Mensagens por tag nas mailboxes cujo binder de fonte é ``mailbox``."""
    total: Counter[str] = Counter()
    for name in _instances(state, mailbox, origins or {}):
        total.update(_counts(state, name))
    return dict(total)


def guards_on(state: Process, mailbox: str, origins: Mapping[str, str] | None = None) -> list[GuardedProcess]:
    """Guards expostos sobre as instâncias de ``mailbox``."""
    names = set(_instances(state, mailbox, origins or {}))
    _, components = nf_parts(state)
    return [
        c
        for c in components
        if isinstance(c, GuardedProcess) and any(b.name in names for b in c.branches)
    ]


@dataclass(frozen=True)
class MailboxBounds:
    mailbox: str
    bounds: dict[str, tuple[int, int]]
    exact: bool
    """Falso quando o grafo foi truncado (os limites são estimativas inferiores)."""

    def to_dict(self) -> dict:
        return {
            "mailbox": self.mailbox,
            "exact": self.exact,
            "bounds": {tag: list(b) for tag, b in sorted(self.bounds.items())},
        }


def mailbox_bounds(
    program: Program, graph: StateGraph, mailbox: str, tags: tuple[str, ...] = ()
) -> MailboxBounds:
    """Mínimo e máximo de mensagens por tag em cada instância viva da mailbox."""
    del program  # os estados já trazem tudo que é preciso
    samples: list[Counter[str]] = []
    for key, state in graph.states.items():
        for name in _instances(state, mailbox, graph.origins.get(key, {})):
            samples.append(_counts(state, name))
    all_tags = set(tags).union(*(s.keys() for s in samples)) if samples else set(tags)
    bounds = {
        tag: (
            min((s[tag] for s in samples), default=0),
            max((s[tag] for s in samples), default=0),
        )
        for tag in sorted(all_tags)
    }
    return MailboxBounds(mailbox, bounds, graph.complete)
