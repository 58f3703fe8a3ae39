"""Maximum-weight total matching.

A total matching is the non-incident union of a stable set and a matching:
no two chosen vertices adjacent, no two chosen edges sharing an endpoint,
no chosen vertex an endpoint of a chosen edge. Equivalently all constraints
x_v + sum_{e at v} y_e <= 1 and x_u + x_v + y_{uv} <= 1 hold.

Three solvers: an exhaustive branch-and-bound oracle, a linear dynamic
program on disjoint unions of paths with per-vertex selection restrictions,
and the fixed-parameter algorithm that enumerates partial solutions on the
hitting set Z of a structural decomposition and finishes each with the DP.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import BoundExceededError, InputError, SizeCapError
from .graphs import Graph, classify_paths_and_cycles, delete_vertices
from .structure import DeltaOutcome, compute_decomposition

DEFAULT_BRUTE_CAP = 20
DEFAULT_PARTIAL_CAP = 20  # max |I(Z)| enumerated by solve_fpt

_NEG = -(1 << 60)  # "impossible" DP score


@dataclass(frozen=True)
class TotalMatching:
    chosen_vertices: tuple[int, ...]
    chosen_edges: tuple[int, ...]  # edge indices
    weight: int


def is_total_matching(g: Graph, s: TotalMatching) -> bool:
    """True iff s satisfies all three constraints (ids must be valid)."""
    for v in s.chosen_vertices:
        g._check_vertex(v)
    for i in s.chosen_edges:
        g._check_edge(i)
    chosen_v = set(s.chosen_vertices)
    used = set()
    for i in s.chosen_edges:
        u, v = g.edge_endpoints(i)
        if u in used or v in used:
            return False  # not a matching
        if u in chosen_v or v in chosen_v:
            return False  # chosen vertex on a chosen edge
        used.update((u, v))
    for v in chosen_v:
        if any(u in chosen_v for u in g.neighbors(v)):
            return False  # not a stable set
    return True


def total_matching_weight(g: Graph, s: TotalMatching) -> int:
    return (sum(g.vertex_weight(v) for v in s.chosen_vertices)
            + sum(g.edge_weight(i) for i in s.chosen_edges))


def format_total_matching(g: Graph, s: TotalMatching) -> str:
    edges = " ".join(
        "({},{})".format(*g.edge_endpoints(i)) for i in s.chosen_edges)
    vertices = " ".join(str(v) for v in s.chosen_vertices)
    return f"weight: {s.weight} / vertices: {vertices} / edges: {edges}"


# ---------------------------------------------------------------------------
# Element conflict machinery (shared by the oracle and the FPT enumeration)


def _conflict_masks(g: Graph, elems: list[tuple[str, int]]) -> list[int]:
    """For elements (kind, index) listed in order, the bitmask of earlier
    and later elements that cannot be chosen together with each one."""
    pos = {e: i for i, e in enumerate(elems)}
    masks = [0] * len(elems)

    def link(a, b):
        if a in pos and b in pos and a != b:
            masks[pos[a]] |= 1 << pos[b]
            masks[pos[b]] |= 1 << pos[a]

    for i, (u, v, _w) in enumerate(g.edges, start=1):
        link(("v", u), ("v", v))        # adjacent vertices
        link(("v", u), ("e", i))        # endpoint of a chosen edge
        link(("v", v), ("e", i))
    for v in range(1, g.n + 1):
        inc = [("e", i) for _, i in g.adjacency[v - 1]]
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                link(inc[a], inc[b])    # edges sharing endpoint v
    return masks


def _element_weight(g: Graph, elem: tuple[str, int]) -> int:
    kind, index = elem
    return g.vertex_weight(index) if kind == "v" else g.edge_weight(index)


def _split(elems: list[tuple[str, int]], mask: int):
    vs = [idx for b, (kind, idx) in enumerate(elems) if kind == "v" and mask >> b & 1]
    es = [idx for b, (kind, idx) in enumerate(elems) if kind == "e" and mask >> b & 1]
    return tuple(sorted(vs)), tuple(sorted(es))


# ---------------------------------------------------------------------------
# Exhaustive oracle


def solve_brute(g: Graph, cap: int = DEFAULT_BRUTE_CAP) -> TotalMatching:
    """Maximum-weight total matching by branch and bound.

    Deterministic tie-break: among maximum-weight solutions, the one whose
    element bitmask (vertices 1..n as low bits, then edges) is numerically
    smallest. Elements of weight <= 0 never appear in that solution, so
    they are discarded up front.
    """
    size = g.num_elements
    if size > cap:
        raise SizeCapError(f"graph has {size} elements, oracle cap is {cap}",
                           size=size, cap=cap)
    elems = [("v", v) for v in range(1, g.n + 1)] + \
            [("e", i) for i in range(1, g.m + 1)]
    keep = [e for e in elems if _element_weight(g, e) > 0]
    conflicts = _conflict_masks(g, keep)
    weights = [_element_weight(g, e) for e in keep]
    # prefix[i] = total weight of elements 0..i-1 (all positive).
    prefix = [0]
    for w in weights:
        prefix.append(prefix[-1] + w)

    best_weight = 0
    best_mask = 0

    # Decide elements from the highest bit down, exclusion first: subsets
    # are visited in increasing bitmask order, so with strict improvement
    # the recorded optimum is the numerically smallest one.
    def search(i: int, mask: int, weight: int) -> None:
        nonlocal best_weight, best_mask
        if weight + prefix[i + 1] <= best_weight:
            return
        if i < 0:
            best_weight, best_mask = weight, mask
            return
        search(i - 1, mask, weight)
        if not (mask & conflicts[i]):
            search(i - 1, mask | (1 << i), weight + weights[i])

    search(len(keep) - 1, 0, 0)
    vs, es = _split(keep, best_mask)
    return TotalMatching(chosen_vertices=vs, chosen_edges=es,
                         weight=best_weight)


# ---------------------------------------------------------------------------
# Dynamic program on disjoint paths


@dataclass(frozen=True)
class PathInstance:
    """A path of the host graph: vertices in order, the connecting edges,
    their weights, and a per-vertex flag telling whether the vertex itself
    may be chosen (its edges always may)."""

    vertices: tuple[int, ...]
    vertex_weights: tuple[int, ...]
    edges: tuple[int, ...]  # host edge indices, edges[i] joins vertices[i], vertices[i+1]
    edge_weights: tuple[int, ...]
    vertex_selectable: tuple[bool, ...]

    def __post_init__(self):
        k = len(self.vertices)
        if k == 0:
            raise InputError("path instance needs at least one vertex")
        if len(self.edges) != k - 1 or len(self.edge_weights) != k - 1:
            raise InputError("path instance needs exactly k-1 edges")
        if len(self.vertex_weights) != k or len(self.vertex_selectable) != k:
            raise InputError("per-vertex data length must equal k")

    @staticmethod
    def from_path(g: Graph, vertices, selectable=None) -> "PathInstance":
        vs = tuple(vertices)
        edge_of = {}
        for v in vs:
            for u, i in g.adjacency[v - 1]:
                edge_of[(v, u)] = i
        try:
            edges = tuple(edge_of[(vs[i], vs[i + 1])] for i in range(len(vs) - 1))
        except KeyError as missing:
            raise InputError(f"consecutive vertices {missing} not adjacent") from None
        if selectable is None:
            flags = (True,) * len(vs)
        else:
            flags = tuple(bool(x) for x in selectable)
        return PathInstance(
            vertices=vs,
            vertex_weights=tuple(g.vertex_weight(v) for v in vs),
            edges=edges,
            edge_weights=tuple(g.edge_weight(i) for i in edges),
            vertex_selectable=flags)


def solve_paths_dp(paths: list[PathInstance]) -> TotalMatching:
    """Optimal total matching on a disjoint union of paths, in linear time.

    Per position, three states: FREE (vertex unchosen, incoming edge
    unchosen), VERT (vertex chosen), EDGE (incoming edge chosen). Choosing
    vertex i+1 forbids VERT and EDGE at i; choosing edge (i, i+1) requires
    FREE at i. The empty selection is always feasible, so nothing of
    negative weight is ever forced.
    """
    vertices: list[int] = []
    edges: list[int] = []
    total = 0
    for path in paths:
        k = len(path.vertices)
        # dp[i] = (FREE, VERT, EDGE) best scores; choice[i] remembers the
        # predecessor state per state for reconstruction.
        dp = [(0, path.vertex_weights[0] if path.vertex_selectable[0] else _NEG,
               _NEG)]
        choice: list[tuple[int, int, int]] = [(-1, -1, -1)]
        for i in range(1, k):
            free, vert, edge = dp[i - 1]
            wv = path.vertex_weights[i]
            we = path.edge_weights[i - 1]
            options_free = (free, vert, edge)
            nfree = max(options_free)
            cfree = options_free.index(nfree)
            if path.vertex_selectable[i]:
                nvert = max(free, edge) + wv
                cvert = 0 if free >= edge else 2
            else:
                nvert, cvert = _NEG, -1
            nedge = free + we if free > _NEG else _NEG
            dp.append((nfree, nvert, nedge))
            choice.append((cfree, cvert, 0))
        state = max(range(3), key=lambda s: dp[k - 1][s])
        total += dp[k - 1][state]
        for i in range(k - 1, -1, -1):
            if state == 1:
                vertices.append(path.vertices[i])
            elif state == 2:
                edges.append(path.edges[i - 1])
            state = choice[i][state]
    return TotalMatching(chosen_vertices=tuple(sorted(vertices)),
                         chosen_edges=tuple(sorted(edges)),
                         weight=total)


# ---------------------------------------------------------------------------
# Fixed-parameter algorithm


def solve_fpt(g: Graph, bound: int,
              partial_cap: int = DEFAULT_PARTIAL_CAP) -> TotalMatching:
    """Maximum-weight total matching, parameterized by the subdeterminant
    bound. Requires compute_decomposition(g, bound) to succeed; otherwise a
    bound error carrying the exceeds certificate is raised.

    Let I(Z) be the elements incident to the hitting set Z: its vertices,
    the edges leaving it, and the edges inside it. Every total matching
    splits into M1 = its part in I(Z) and a remainder on the paths of
    G - Z. For each feasible M1: endpoints of M1-edges outside Z are
    deleted (with their edges), remaining neighbors of chosen Z-vertices
    become non-selectable (their edges stay available), and the rest is
    solved by the path DP.
    """
    outcome = compute_decomposition(g, bound)
    if isinstance(outcome, DeltaOutcome):
        raise BoundExceededError(
            f"subdeterminant bound {bound} exceeded "
            f"({outcome.certificate.kind})",
            certificate=outcome.certificate)

    zset = set(outcome.Z)
    elems = [("v", v) for v in sorted(zset)]
    elems += [("e", i) for i, (u, v, _w) in enumerate(g.edges, start=1)
              if u in zset or v in zset]
    if len(elems) > partial_cap:
        raise SizeCapError(
            f"|I(Z)| = {len(elems)} elements to enumerate, cap is {partial_cap}",
            size=len(elems), cap=partial_cap)
    conflicts = _conflict_masks(g, elems)

    best: Optional[TotalMatching] = None
    memo: dict[tuple[frozenset, frozenset], TotalMatching] = {}
    for mask in _feasible_subsets(conflicts):
        zv, ze = _split(elems, mask)
        w1 = sum(g.vertex_weight(v) for v in zv) + \
            sum(g.edge_weight(i) for i in ze)
        zprime = frozenset(v for i in ze for v in g.edge_endpoints(i)
                           if v not in zset)
        blocked = frozenset(u for v in zv for u in g.neighbors(v)
                            if u not in zset and u not in zprime)
        key = (zprime, blocked)
        rest = memo.get(key)
        if rest is None:
            residue = delete_vertices(g, zset | zprime)
            paths = [
                PathInstance.from_path(
                    g, path, [v not in blocked for v in path])
                for path in _host_paths(residue)]
            rest = solve_paths_dp(paths)
            memo[key] = rest
        weight = w1 + rest.weight
        if best is None or weight > best.weight:
            best = TotalMatching(
                chosen_vertices=tuple(sorted(zv + rest.chosen_vertices)),
                chosen_edges=tuple(sorted(ze + rest.chosen_edges)),
                weight=weight)
    assert best is not None  # the empty M1 is always feasible
    return best


def _feasible_subsets(conflicts: list[int]) -> Iterator[int]:
    """All bitmasks over the elements with no internal conflict, in
    increasing numeric order (fixed tie-break order for solve_fpt)."""
    n = len(conflicts)

    # Deciding the highest element first, exclusion first, yields masks
    # in increasing numeric order.
    def rec_desc(i: int, mask: int) -> Iterator[int]:
        if i < 0:
            yield mask
            return
        yield from rec_desc(i - 1, mask)
        if not (mask & conflicts[i]):
            yield from rec_desc(i - 1, mask | (1 << i))

    return rec_desc(n - 1, 0)


def _host_paths(residue) -> list[tuple[int, ...]]:
    """Path components of a Subgraph, as host-vertex sequences."""
    classification = classify_paths_and_cycles(residue.graph)
    if classification.cycles:
        raise InputError("residue of the decomposition contains a cycle")
    return [tuple(residue.host_vertex(v) for v in path)
            for path in classification.paths]
