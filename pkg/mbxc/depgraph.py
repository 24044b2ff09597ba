"""
Grafos de dependência entre nomes.

Um grafo é uma árvore sintática (vazio, aresta, união, restrição). Para as
consultas usamos a forma achatada: multigrafo com os nomes restritos
renomeados, onde aciclicidade vira um teste de floresta e a relação de
dependência vira conectividade por trilhas (cada aresta usada no máximo
uma vez).

O sistema de transições rotuladas literal fica em ``literal_relation``
como oráculo de pequena escala para os testes.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cache

Pair = frozenset[str]
"""Par não ordenado de nomes; tamanho 1 para pares reflexivos."""


class DepGraph:
    """Base dos nós sintáticos de grafo de dependência."""

    def __or__(self, other: DepGraph) -> DepGraph:
        return union(self, other)

    def __str__(self) -> str:
        text = to_text(self)
        return "{" + text + "}"


@dataclass(frozen=True)
class Empty(DepGraph):
    def __str__(self) -> str:
        return "{}"


@dataclass(frozen=True)
class Edge(DepGraph):
    u: str
    v: str


@dataclass(frozen=True)
class Union(DepGraph):
    left: DepGraph
    right: DepGraph


@dataclass(frozen=True)
class Restrict(DepGraph):
    name: str
    body: DepGraph


EMPTY = Empty()


def union(*graphs: DepGraph) -> DepGraph:
    """União multiconjunto; vazios são descartados só na construção."""
    parts = [g for g in graphs if not isinstance(g, Empty)]
    if not parts:
        return EMPTY
    result = parts[0]
    for g in parts[1:]:
        result = Union(result, g)
    return result


def edges_from(u: str, names: Iterable[str]) -> DepGraph:
    """Arestas u–v para cada v (na ordem dada)."""
    return union(*(Edge(u, v) for v in names))


def restrict(name: str, body: DepGraph) -> DepGraph:
    if name not in free_names(body):
        return body
    return Restrict(name, body)


def free_names(graph: DepGraph) -> frozenset[str]:
    match graph:
        case Empty():
            return frozenset()
        case Edge(u, v):
            return frozenset({u, v})
        case Union(left, right):
            return free_names(left) | free_names(right)
        case Restrict(name, body):
            return free_names(body) - {name}
    raise TypeError(f"grafo inválido: {graph!r}")


def to_text(graph: DepGraph) -> str:
    """Texto sem chaves externas: ``a-b, c-d; new x. {x-a}``."""
    edges: list[str] = []
    scopes: list[str] = []
    for leaf in _union_leaves(graph):
        match leaf:
            case Edge(u, v):
                edges.append(f"{u}-{v}")
            case Restrict(name, body):
                inner = to_text(body)
                if isinstance(body, Union):
                    inner = "{" + inner + "}"
                scopes.append(f"new {name}. {inner}")
    text = ", ".join(edges)
    if scopes:
        text = f"{text}; " if text else ""
        text += "; ".join(scopes)
    return text


def _union_leaves(graph: DepGraph) -> list[DepGraph]:
    match graph:
        case Empty():
            return []
        case Union(left, right):
            return _union_leaves(left) + _union_leaves(right)
    return [graph]


# ---------------------------------------------------------------------------
# Forma achatada
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlatGraph:
    """Multigrafo achatado: nomes restritos recebem sufixo ``#k``."""

    free: frozenset[str]
    vertices: frozenset[str]
    edges: tuple[tuple[str, str], ...]

    def to_dict(self) -> dict:
        return {
            "vertices": sorted(self.vertices),
            "edges": [list(edge) for edge in self.edges],
        }


def flatten(graph: DepGraph) -> FlatGraph:
    counter = itertools.count()
    edges: list[tuple[str, str]] = []

    def walk(g: DepGraph, renaming: Mapping[str, str]) -> None:
        match g:
            case Empty():
                return
            case Edge(u, v):
                edges.append((renaming.get(u, u), renaming.get(v, v)))
            case Union(left, right):
                walk(left, renaming)
                walk(right, renaming)
            case Restrict(name, body):
                walk(body, {**renaming, name: f"{name}#{next(counter)}"})

    walk(graph, {})
    vertices = frozenset(itertools.chain.from_iterable(edges))
    return FlatGraph(free_names(graph), vertices, tuple(edges))


def _components(flat: FlatGraph) -> list[tuple[set[str], list[tuple[str, str]]]]:
    adjacency: defaultdict[str, set[str]] = defaultdict(set)
    for u, v in flat.edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    seen: set[str] = set()
    components = []
    for start in sorted(flat.vertices):
        if start in seen:
            continue
        stack, members = [start], {start}
        while stack:
            for nxt in adjacency[stack.pop()]:
                if nxt not in members:
                    members.add(nxt)
                    stack.append(nxt)
        seen |= members
        component_edges = [e for e in flat.edges if e[0] in members]
        components.append((members, component_edges))
    return components


def acyclic(graph: DepGraph) -> bool:
    """Teste de floresta contando multiplicidades (laços são ciclos)."""
    flat = flatten(graph)
    return all(
        len(edges) == len(members) - 1 for members, edges in _components(flat)
    )


def find_cycle(graph: DepGraph) -> list[tuple[str, str]] | None:
    """Devolve as arestas de um ciclo mínimo (primeiro encontrado), se houver."""
    flat = flatten(graph)
    for index, (u, v) in enumerate(flat.edges):
        if u == v:
            return [(u, v)]
        others = flat.edges[:index] + flat.edges[index + 1 :]
        path = _shortest_path(others, v, u)
        if path is not None:
            return [(u, v), *path]
    return None


def _shortest_path(
    edges: tuple[tuple[str, str], ...], source: str, target: str
) -> list[tuple[str, str]] | None:
    adjacency: defaultdict[str, list[str]] = defaultdict(list)
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)
    parents: dict[str, str | None] = {source: None}
    frontier = [source]
    while frontier:
        nxt: list[str] = []
        for node in frontier:
            for other in adjacency[node]:
                if other not in parents:
                    parents[other] = node
                    nxt.append(other)
        frontier = nxt
    if target not in parents:
        return None
    path: list[tuple[str, str]] = []
    node = target
    while parents[node] is not None:
        parent = parents[node]
        path.append((parent, node))
        node = parent
    return list(reversed(path))


def grel(graph: DepGraph) -> frozenset[Pair]:
    """Relação de dependência sobre nomes livres (pares não ordenados)."""
    flat = flatten(graph)
    pairs: set[Pair] = set()
    for members, edges in _components(flat):
        visible = sorted(members & flat.free)
        for u, v in itertools.combinations(visible, 2):
            pairs.add(frozenset({u, v}))
        for u in visible:
            if _on_closed_trail(u, edges):
                pairs.add(frozenset({u}))
    return frozenset(pairs)


def _on_closed_trail(vertex: str, edges: list[tuple[str, str]]) -> bool:
    for index, (a, b) in enumerate(edges):
        if vertex not in (a, b):
            continue
        if a == b:
            return True
        other = b if a == vertex else a
        rest = tuple(edges[:index] + edges[index + 1 :])
        if _shortest_path(rest, other, vertex) is not None:
            return True
    return False


def entails(phi: DepGraph, psi: DepGraph) -> bool:
    """φ ⇒ ψ: toda dependência de ψ já está em φ."""
    return grel(psi) <= grel(phi)


def substitute_graph(graph: DepGraph, mapping: Mapping[str, str]) -> DepGraph:
    """Renomeia vértices livres; binders que colidem com a imagem são renovados."""
    targets = set(mapping.values())
    counter = itertools.count(1)

    def walk(g: DepGraph, active: Mapping[str, str]) -> DepGraph:
        match g:
            case Empty():
                return g
            case Edge(u, v):
                return Edge(active.get(u, u), active.get(v, v))
            case Union(left, right):
                return Union(walk(left, active), walk(right, active))
            case Restrict(name, body):
                inner = {k: val for k, val in active.items() if k != name}
                fresh = name
                while fresh in targets or fresh in inner.values():
                    fresh = name + "'" * next(counter)
                if fresh != name:
                    inner[name] = fresh
                return Restrict(fresh, walk(body, inner))
        raise TypeError(f"grafo inválido: {g!r}")

    return walk(graph, dict(mapping))


def edge_multiset(graph: DepGraph) -> Counter[Pair]:
    """Multiconjunto das arestas livres (útil em diagnósticos)."""
    flat = flatten(graph)
    return Counter(frozenset(edge) for edge in flat.edges)


# ---------------------------------------------------------------------------
# Oráculo literal (exponencial) sobre o sistema de transições
# ---------------------------------------------------------------------------


def _freshen(graph: DepGraph) -> DepGraph:
    counter = itertools.count()

    def walk(g: DepGraph) -> DepGraph:
        match g:
            case Union(left, right):
                return Union(walk(left), walk(right))
            case Restrict(name, body):
                fresh = f"{name}#{next(counter)}"
                return Restrict(fresh, substitute_graph(walk(body), {name: fresh}))
        return g

    return walk(graph)


@cache
def _transitions(
    graph: DepGraph, observe_bound: bool
) -> frozenset[tuple[str, str, DepGraph]]:
    base: set[tuple[str, str, DepGraph]] = set()
    match graph:
        case Edge(u, v):
            base |= {(u, v, EMPTY), (v, u, EMPTY)}
        case Union(left, right):
            base |= {(u, v, Union(rest, right)) for u, v, rest in _transitions(left, observe_bound)}
            base |= {(u, v, Union(left, rest)) for u, v, rest in _transitions(right, observe_bound)}
        case Restrict(name, body):
            base |= {
                (u, v, Restrict(name, rest))
                for u, v, rest in _transitions(body, observe_bound)
                if observe_bound or name not in (u, v)
            }
    closed = set(base)
    for u, w, residual in base:
        for w2, v, final in _transitions(residual, observe_bound):
            if w2 == w:
                closed.add((u, v, final))
    return frozenset(closed)


def literal_relation(graph: DepGraph, observe_bound: bool = False) -> frozenset[Pair]:
    """Relação gerada pelas regras g-* aplicadas literalmente."""
    fresh = _freshen(graph)
    return frozenset(frozenset({u, v}) for u, v, _ in _transitions(fresh, observe_bound))
