"""Simple undirected graphs with integer weights on vertices and edges.

Vertices are numbered 1..n. Edges are stored in input order and referred to
by 1-based index; an edge is an unordered pair of distinct vertices. Graphs
are immutable after construction and all queries are pure.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, NamedTuple, Optional

from .errors import InputError, PreconditionError


class Element(NamedTuple):
    """A vertex or an edge of a graph: kind is 'v' or 'e', index is 1-based."""

    kind: str
    index: int

    def __str__(self):
        return f"{self.kind}{self.index}"


def vertex_element(i: int) -> Element:
    return Element("v", i)


def edge_element(i: int) -> Element:
    return Element("e", i)


def parse_element(token: str) -> Element:
    if len(token) >= 2 and token[0] in "ve" and token[1:].isdigit():
        return Element(token[0], int(token[1:]))
    raise InputError(f"invalid element token {token!r}")


@dataclass(frozen=True)
class Graph:
    n: int
    vertex_weights: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (u, v, weight) with u < v

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be >= 0")
        if len(self.vertex_weights) != self.n:
            raise InputError("vertex weight list length must equal n")
        seen = set()
        for u, v, _w in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise InputError(f"edge endpoint out of range: ({u},{v})")
            if u == v:
                raise InputError(f"loop at vertex {u} not allowed")
            if u > v:
                raise InputError("edges must be stored with u < v")
            if (u, v) in seen:
                raise InputError(f"parallel edge ({u},{v}) not allowed")
            seen.add((u, v))

    @staticmethod
    def build(n: int,
              edges: Iterable[tuple[int, int] | tuple[int, int, int]],
              vertex_weights: Optional[Iterable[int]] = None) -> "Graph":
        """Normalize endpoints (u < v) and default all weights to 1."""
        norm = []
        for e in edges:
            if len(e) == 2:
                u, v = e
                w = 1
            else:
                u, v, w = e
            norm.append((min(u, v), max(u, v), w))
        if vertex_weights is None:
            vw = (1,) * n
        else:
            vw = tuple(vertex_weights)
        return Graph(n=n, vertex_weights=vw, edges=tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def num_elements(self) -> int:
        return self.n + self.m

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """For each vertex, the tuple of (neighbor, edge index) pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for i, (u, v, _w) in enumerate(self.edges, start=1):
            adj[u - 1].append((v, i))
            adj[v - 1].append((u, i))
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adjacency[v - 1])

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return tuple(u for u, _ in self.adjacency[v - 1])

    def edge_endpoints(self, i: int) -> tuple[int, int]:
        self._check_edge(i)
        u, v, _w = self.edges[i - 1]
        return u, v

    def edge_weight(self, i: int) -> int:
        self._check_edge(i)
        return self.edges[i - 1][2]

    def vertex_weight(self, v: int) -> int:
        self._check_vertex(v)
        return self.vertex_weights[v - 1]

    def elements(self) -> tuple[Element, ...]:
        """All elements, vertices 1..n first, then edges in input order."""
        return tuple(Element("v", i) for i in range(1, self.n + 1)) + \
            tuple(Element("e", i) for i in range(1, self.m + 1))

    def has_element(self, a: Element) -> bool:
        if a.kind == "v":
            return 1 <= a.index <= self.n
        if a.kind == "e":
            return 1 <= a.index <= self.m
        return False

    def check_element(self, a: Element) -> None:
        if not self.has_element(a):
            raise InputError(f"element {a} not in graph")

    def _check_vertex(self, v: int) -> None:
        if not (1 <= v <= self.n):
            raise InputError(f"vertex id {v} out of range 1..{self.n}")

    def _check_edge(self, i: int) -> None:
        if not (1 <= i <= self.m):
            raise InputError(f"edge index {i} out of range 1..{self.m}")

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)


def incident(g: Graph, a: Element, b: Element) -> bool:
    """True iff a == b or one element is an edge with the other as endpoint.

    Two distinct vertices are never incident, even when adjacent.
    """
    g.check_element(a)
    g.check_element(b)
    if a == b:
        return True
    if a.kind == "v" and b.kind == "e":
        return a.index in g.edge_endpoints(b.index)
    if a.kind == "e" and b.kind == "v":
        return b.index in g.edge_endpoints(a.index)
    return False


@dataclass(frozen=True)
class Subgraph:
    """An induced subgraph together with maps back to the host graph.

    vertex_ids[i] is the host id of subgraph vertex i+1; edge_ids[j] is the
    host index of subgraph edge j+1.
    """

    graph: Graph
    vertex_ids: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def host_vertex(self, v: int) -> int:
        return self.vertex_ids[v - 1]

    def host_edge(self, i: int) -> int:
        return self.edge_ids[i - 1]


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Subgraph:
    """Subgraph induced by the given host vertices, with relabeling maps."""
    vs = sorted(set(vertices))
    for v in vs:
        g._check_vertex(v)
    index = {v: i + 1 for i, v in enumerate(vs)}
    edges = []
    edge_ids = []
    for i, (u, v, w) in enumerate(g.edges, start=1):
        if u in index and v in index:
            edges.append((index[u], index[v], w))
            edge_ids.append(i)
    sub = Graph.build(len(vs), edges, [g.vertex_weight(v) for v in vs])
    return Subgraph(graph=sub, vertex_ids=tuple(vs), edge_ids=tuple(edge_ids))


def delete_vertices(g: Graph, vertices: Iterable[int]) -> Subgraph:
    drop = set(vertices)
    return induced_subgraph(g, (v for v in range(1, g.n + 1) if v not in drop))


def components(g: Graph) -> list[Subgraph]:
    """Connected components as induced subgraphs with relabeling maps."""
    seen = [False] * (g.n + 1)
    out = []
    for s in range(1, g.n + 1):
        if seen[s]:
            continue
        stack = [s]
        seen[s] = True
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u, _ in g.adjacency[v - 1]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        out.append(induced_subgraph(g, comp))
    return out


@dataclass(frozen=True)
class PathCycleClassification:
    paths: tuple[tuple[int, ...], ...]   # ordered vertex sequences
    cycles: tuple[tuple[int, ...], ...]  # cyclic vertex sequences


def classify_paths_and_cycles(g: Graph) -> PathCycleClassification:
    """Partition a max-degree-2 graph into ordered paths and cycles.

    Paths are listed starting from their smaller endpoint; cycles start at
    their minimum vertex and proceed toward the smaller neighbor. Isolated
    vertices are paths of length 0.
    """
    if g.max_degree() > 2:
        bad = next(v for v in range(1, g.n + 1) if g.degree(v) > 2)
        raise PreconditionError(f"vertex {bad} has degree {g.degree(bad)} > 2")
    paths = []
    cycles = []
    for sub in components(g):
        h = sub.graph
        ends = [v for v in range(1, h.n + 1) if h.degree(v) <= 1]
        if ends:
            start = min(ends)
            seq = _walk(h, start)
            paths.append(tuple(sub.host_vertex(v) for v in seq))
        else:
            start = 1  # minimum id in the relabeled component
            seq = _walk(h, start)
            cycles.append(tuple(sub.host_vertex(v) for v in seq))
    return PathCycleClassification(paths=tuple(sorted(paths)),
                                   cycles=tuple(sorted(cycles)))


def _walk(h: Graph, start: int) -> list[int]:
    seq = [start]
    prev = None
    cur = start
    while True:
        nbrs = [u for u in h.neighbors(cur) if u != prev]
        if not nbrs:
            return seq
        nxt = min(nbrs)
        if nxt == start:
            return seq
        seq.append(nxt)
        prev, cur = cur, nxt


@dataclass(frozen=True)
class DegreeSequence:
    degrees: tuple[int, ...]  # sorted descending

    def n_at_least(self, d: int) -> int:
        """Number of vertices of degree >= d."""
        return sum(1 for x in self.degrees if x >= d)


def degree_sequence(g: Graph) -> DegreeSequence:
    return DegreeSequence(degrees=tuple(
        sorted((g.degree(v) for v in range(1, g.n + 1)), reverse=True)))


# ---------------------------------------------------------------------------
# Generators


def generate(family: str, params: dict, seed: int = 0) -> Graph:
    """Deterministic graph generator for the test families.

    Families: path(n), cycle(n), star(k), spider(b, l),
    random_forest(n, p=0.7), random_sparse(n, m). The random families accept
    optional integer weight bounds wmin/wmax applied to vertices and edges.
    """
    try:
        builder = _FAMILIES[family]
    except KeyError:
        raise InputError(f"unknown family {family!r}") from None
    return builder(dict(params), random.Random(seed))


def _int_param(params: dict, name: str, minimum: int = 0) -> int:
    if name not in params:
        raise InputError(f"missing parameter {name!r}")
    value = int(params.pop(name))
    if value < minimum:
        raise InputError(f"parameter {name}={value} must be >= {minimum}")
    return value


def _weight_drawer(params: dict, rng: random.Random) -> Callable[[], int]:
    wmin = int(params.pop("wmin", 1))
    wmax = int(params.pop("wmax", wmin))
    if wmin > wmax:
        raise InputError("wmin must be <= wmax")
    if (wmin, wmax) == (1, 1):
        return lambda: 1
    return lambda: rng.randint(wmin, wmax)


def _check_consumed(params: dict) -> None:
    if params:
        raise InputError(f"unknown parameters: {sorted(params)}")


def _gen_path(params, rng):
    n = _int_param(params, "n")
    _check_consumed(params)
    return Graph.build(n, [(i, i + 1) for i in range(1, n)])


def _gen_cycle(params, rng):
    n = _int_param(params, "n", minimum=3)
    _check_consumed(params)
    edges = [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    return Graph.build(n, edges)


def _gen_star(params, rng):
    k = _int_param(params, "k")
    _check_consumed(params)
    return Graph.build(k + 1, [(1, i) for i in range(2, k + 2)])


def _gen_spider(params, rng):
    # Center 1, branch vertices 2..b+1, then l leaves per branch.
    b = _int_param(params, "b")
    leaves = _int_param(params, "l")
    _check_consumed(params)
    edges = [(1, 1 + i) for i in range(1, b + 1)]
    nxt = b + 2
    for i in range(1, b + 1):
        for _ in range(leaves):
            edges.append((1 + i, nxt))
            nxt += 1
    return Graph.build(nxt - 1, edges)


def _gen_random_forest(params, rng):
    n = _int_param(params, "n")
    p = float(params.pop("p", 0.7))
    draw = _weight_drawer(params, rng)
    _check_consumed(params)
    edges = []
    for i in range(2, n + 1):
        if rng.random() < p:
            edges.append((rng.randint(1, i - 1), i, draw()))
    return Graph.build(n, edges, [draw() for _ in range(n)])


def _gen_random_sparse(params, rng):
    n = _int_param(params, "n")
    m = _int_param(params, "m")
    draw = _weight_drawer(params, rng)
    _check_consumed(params)
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    if m > len(pairs):
        raise InputError(f"m={m} exceeds the {len(pairs)} available pairs")
    chosen = rng.sample(pairs, m)
    return Graph.build(n, [(u, v, draw()) for u, v in chosen],
                       [draw() for _ in range(n)])


_FAMILIES = {
    "path": _gen_path,
    "cycle": _gen_cycle,
    "star": _gen_star,
    "spider": _gen_spider,
    "random_forest": _gen_random_forest,
    "random_sparse": _gen_random_sparse,
}


# ---------------------------------------------------------------------------
# Text format
#
#   # comments allowed anywhere
#   graph <n> <m>
#   v <id> <weight>        (optional; missing ids default to weight 1)
#   e <u> <v> <weight>     (exactly m lines)


def parse_graph(text: str) -> Graph:
    n = None
    m = None
    weights: dict[int, int] = {}
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            if parts[0] == "graph":
                if n is not None:
                    raise InputError(f"line {lineno}: duplicate graph header")
                if len(parts) != 3:
                    raise InputError(f"line {lineno}: expected 'graph <n> <m>'")
                n, m = int(parts[1]), int(parts[2])
                if n < 0 or m < 0:
                    raise InputError(f"line {lineno}: negative counts")
            elif parts[0] == "v":
                if n is None:
                    raise InputError(f"line {lineno}: 'v' before graph header")
                if len(parts) != 3:
                    raise InputError(f"line {lineno}: expected 'v <id> <weight>'")
                vid, w = int(parts[1]), int(parts[2])
                if not (1 <= vid <= n):
                    raise InputError(f"line {lineno}: vertex id {vid} out of range")
                if vid in weights:
                    raise InputError(f"line {lineno}: duplicate vertex line for {vid}")
                weights[vid] = w
            elif parts[0] == "e":
                if n is None:
                    raise InputError(f"line {lineno}: 'e' before graph header")
                if len(parts) != 4:
                    raise InputError(f"line {lineno}: expected 'e <u> <v> <weight>'")
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
                edges.append((u, v, w))
            else:
                raise InputError(f"line {lineno}: unknown record {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"line {lineno}: {exc}") from None
    if n is None:
        raise InputError("missing 'graph <n> <m>' header")
    if len(edges) != m:
        raise InputError(f"expected {m} edge lines, found {len(edges)}")
    vw = [weights.get(i, 1) for i in range(1, n + 1)]
    return Graph.build(n, edges, vw)


def format_graph(g: Graph) -> str:
    lines = [f"graph {g.n} {g.m}"]
    lines += [f"v {i} {g.vertex_weight(i)}" for i in range(1, g.n + 1)]
    lines += [f"e {u} {v} {w}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"
