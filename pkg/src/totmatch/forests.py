"""Forest-specific machinery for the maximum subdeterminant.

On forests every optimal witness is principal, and a Schur complement
collapses the principal submatrix for vertex set S and edge set E' to the
small matrix L~(G', G'') = A(G'') + diag(d_{G'}(v) - 1) indexed by the
vertices of G'' (the subgraph of G' induced by S). Maximizing |det L~| over
pairs G'' <=ind G' <= G therefore computes the maximum subdeterminant, and
closed-form degree-sequence bounds sandwich it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError, PreconditionError, SizeCapError
from .graphs import (Graph, components, degree_sequence, edge_element,
                     vertex_element)
from .matrices import ExactMatrix, det_bareiss, determinant
from .subdet import ElementColoring, SubdetResult, _is_forest

DEFAULT_FORMULA_CAP = 14


@dataclass(frozen=True)
class ForestPair:
    """G' (an edge subset of the forest) together with G'' (a vertex subset
    of V(G') inducing a subgraph of G')."""

    g_prime: tuple[int, ...]       # edge indices, ascending
    g_doubleprime: tuple[int, ...]  # vertex ids, ascending


@dataclass(frozen=True)
class LTildeMatrix:
    base: ExactMatrix  # rows/columns labeled by the G'' vertices

    @property
    def determinant(self) -> int:
        return determinant(self.base)


def _check_pair(f: Graph, pair: ForestPair) -> None:
    if not _is_forest(f):
        raise InputError("L~ pairs are defined on forests only")
    if len(set(pair.g_prime)) != len(pair.g_prime):
        raise InputError("duplicate edge index in G'")
    if len(set(pair.g_doubleprime)) != len(pair.g_doubleprime):
        raise InputError("duplicate vertex in G''")
    covered = set()
    for i in pair.g_prime:
        f._check_edge(i)
        covered.update(f.edge_endpoints(i))
    for v in pair.g_doubleprime:
        f._check_vertex(v)
        if v not in covered:
            raise InputError(f"vertex {v} of G'' is not a vertex of G'")


def l_tilde(f: Graph, pair: ForestPair) -> LTildeMatrix:
    """A(G'') + diag(d_{G'}(v) - 1) over the vertices of G''.

    Its determinant equals, up to sign, the determinant of the principal
    submatrix of M(f) selecting the G'' vertices and the G' edges (Schur
    complement of the edge identity block).
    """
    _check_pair(f, pair)
    deg = [0] * (f.n + 1)
    inside = {}
    vs = sorted(pair.g_doubleprime)
    for i, v in enumerate(vs):
        inside[v] = i
    k = len(vs)
    entries = [[0] * k for _ in range(k)]
    for i in pair.g_prime:
        u, v = f.edge_endpoints(i)
        deg[u] += 1
        deg[v] += 1
        if u in inside and v in inside:
            entries[inside[u]][inside[v]] = 1
            entries[inside[v]][inside[u]] = 1
    for i, v in enumerate(vs):
        entries[i][i] = deg[v] - 1
    labels = tuple(vertex_element(v) for v in vs)
    return LTildeMatrix(base=ExactMatrix(
        k, k, tuple(x for row in entries for x in row),
        row_labels=labels, col_labels=labels))


def pair_witness(f: Graph, pair: ForestPair) -> ElementColoring:
    """The principal element coloring corresponding to a pair."""
    selected = tuple(vertex_element(v) for v in sorted(pair.g_doubleprime)) + \
        tuple(edge_element(i) for i in sorted(pair.g_prime))
    return ElementColoring(red=selected, cyan=selected)


def pair_from_witness(c: ElementColoring) -> ForestPair:
    if c.red != c.cyan:
        raise InputError("pair witnesses are principal (red = cyan)")
    return ForestPair(
        g_prime=tuple(e.index for e in c.red if e.kind == "e"),
        g_doubleprime=tuple(e.index for e in c.red if e.kind == "v"))


# ---------------------------------------------------------------------------
# The enumeration formula


def delta_forest_formula(f: Graph, cap: int = DEFAULT_FORMULA_CAP) -> SubdetResult:
    """Maximum subdeterminant of a forest as max |det L~(G', G'')|.

    When every component of f has at least three vertices, the enumeration
    is restricted to pairs where every edge of G' has an endpoint in G''
    and d_{G'}(v) >= 2 for all v in G'' (the maximum is still attained
    there); otherwise all pairs are enumerated. Pairs are scanned with G'
    by edge bitmask ascending, then G'' by vertex bitmask ascending; the
    first maximizer is reported as a principal witness.
    """
    if not _is_forest(f):
        raise PreconditionError("the enumeration formula requires a forest")
    if f.n > cap:
        raise SizeCapError(f"forest has {f.n} vertices, formula cap is {cap}",
                           size=f.n, cap=cap)
    restricted = all(sub.graph.n >= 3 for sub in components(f))

    best_value = -1
    best_pair = ForestPair((), ())
    for edge_mask in range(1 << f.m):
        edges = [i + 1 for i in range(f.m) if edge_mask >> i & 1]
        deg = [0] * (f.n + 1)
        for i in edges:
            u, v = f.edge_endpoints(i)
            deg[u] += 1
            deg[v] += 1
        if restricted:
            pool = [v for v in range(1, f.n + 1) if deg[v] >= 2]
        else:
            pool = [v for v in range(1, f.n + 1) if deg[v] >= 1]
        pos = {v: j for j, v in enumerate(pool)}
        must_hit = []
        skip = False
        for i in edges:
            u, v = f.edge_endpoints(i)
            bits = (1 << pos[u] if u in pos else 0) | \
                   (1 << pos[v] if v in pos else 0)
            if restricted:
                if bits == 0:
                    skip = True  # edge cannot be covered by any G''
                    break
                must_hit.append(bits)
        if skip:
            continue
        lstar = np.zeros((len(pool), len(pool)), dtype=np.int64)
        for j, v in enumerate(pool):
            lstar[j, j] = deg[v] - 1
        for i in edges:
            u, v = f.edge_endpoints(i)
            if u in pos and v in pos:
                lstar[pos[u], pos[v]] = 1
                lstar[pos[v], pos[u]] = 1
        value, mask = _best_minor(lstar, must_hit)
        if value > best_value:
            best_value = value
            best_pair = ForestPair(
                g_prime=tuple(edges),
                g_doubleprime=tuple(pool[j] for j in range(len(pool))
                                    if mask >> j & 1))
    witness = pair_witness(f, best_pair)
    result = SubdetResult(value=best_value, witness=witness, mode="formula")
    exact = abs(l_tilde(f, best_pair).determinant)
    if exact != best_value:
        raise AssertionError("float determinant verification failed")
    return result


def _best_minor(lstar: np.ndarray, must_hit: list[int]) -> tuple[int, int]:
    """Largest |det| over principal minors lstar[S, S] with S intersecting
    every bitmask in must_hit; returns (value, first achieving S mask).

    Minors are batched in floating point (their magnitudes are maximum
    subdeterminants of a graph on <= 15 vertices, far below 2^53); any
    det that rounds poorly is recomputed exactly before comparison.
    """
    k = lstar.shape[0]
    masks = np.arange(1 << k, dtype=np.uint32)
    ok = np.ones(masks.size, dtype=bool)
    for bits in must_hit:
        ok &= (masks & np.uint32(bits)) != 0
    masks = masks[ok]
    if masks.size == 0:
        return -1, 0
    # Pad every subset to uniform size with dummy diagonal-1 positions so
    # the dets can be batched while scanning masks in ascending order.
    padded = np.zeros((k + k + 1, k + k + 1), dtype=np.float64)
    padded[:k, :k] = lstar
    for j in range(k, 2 * k + 1):
        padded[j, j] = 1.0

    best_value = -1
    best_mask = 0
    chunk = 1 << 13
    for lo in range(0, masks.size, chunk):
        part = masks[lo:lo + chunk]
        bits = ((part[:, None] >> np.arange(k, dtype=np.uint32)) &
                np.uint32(1)).astype(bool)
        counts = bits.sum(axis=1)
        width = int(counts.max())
        pad = np.arange(width)[None, :] >= counts[:, None]
        sel = np.concatenate(
            [bits, np.zeros((part.size, k + 1), dtype=bool)], axis=1)
        # Position k+j is the j-th dummy slot; mark as many as needed.
        rows, cols = np.nonzero(pad)
        sel[rows, k + cols] = True
        idx = np.nonzero(sel)[1].reshape(part.size, width)
        sub = padded[idx[:, :, None], idx[:, None, :]]
        dets = np.abs(np.linalg.det(sub)) if width else np.ones(part.size)
        rounded = np.rint(dets)
        for i in np.nonzero(np.abs(dets - rounded) > 0.25)[0]:
            pick = [j for j in range(k) if part[i] >> j & 1]
            rounded[i] = abs(det_bareiss(
                [[int(lstar[r, c]) for c in pick] for r in pick]))
        i = int(np.argmax(rounded))
        if int(rounded[i]) > best_value:
            best_value = int(rounded[i])
            best_mask = int(part[i])
    return best_value, best_mask


# ---------------------------------------------------------------------------
# Degree-sequence bounds


@dataclass(frozen=True)
class DegreeBounds:
    lower: float
    lower_exact_square: int
    upper: float
    upper_exact: Fraction
    degenerate: bool = False


def degree_sequence_bounds(f: Graph) -> DegreeBounds:
    """sqrt(prod (d_i - 1)) <= max subdeterminant <= (sum d_i / n_2)^{n_2},
    both over the n_2 vertices of degree >= 2 (largest degrees first).

    `lower_exact_square` and `upper_exact` carry the exact integer square
    and exact rational power for rounding-free comparisons. A forest with
    n_2 = 0 is a union of short paths (totally unimodular): all bounds
    degenerate to 1.
    """
    if not _is_forest(f):
        raise PreconditionError("degree-sequence bounds require a forest")
    degrees = degree_sequence(f).degrees
    n2 = sum(1 for d in degrees if d >= 2)
    if n2 == 0:
        return DegreeBounds(lower=1.0, lower_exact_square=1,
                            upper=1.0, upper_exact=Fraction(1),
                            degenerate=True)
    square = 1
    for d in degrees[:n2]:
        square *= d - 1
    upper_exact = Fraction(sum(degrees[:n2]), n2) ** n2
    return DegreeBounds(lower=math.sqrt(square), lower_exact_square=square,
                        upper=float(upper_exact), upper_exact=upper_exact)


def bipartition_lower_witness(f: Graph) -> tuple[tuple[int, ...], int]:
    """A constructive witness for the lower bound: 2-color the induced
    subgraph on degree->=2 vertices into stable sets S_1, S_2; then
    det L~(G, G[S_1]) * det L~(G, G[S_2]) = prod (d_i - 1), so the larger
    side satisfies det >= sqrt(prod (d_i - 1)). Returns (side, det)."""
    if not _is_forest(f):
        raise PreconditionError("bipartition witness requires a forest")
    core = set(v for v in range(1, f.n + 1) if f.degree(v) >= 2)
    color: dict[int, int] = {}
    for v in sorted(core):
        if v in color:
            continue
        color[v] = 0
        stack = [v]
        while stack:
            x = stack.pop()
            for u in f.neighbors(x):
                if u in core and u not in color:
                    color[u] = 1 - color[x]
                    stack.append(u)
    all_edges = tuple(range(1, f.m + 1))
    sides = (tuple(sorted(v for v in core if color[v] == 0)),
             tuple(sorted(v for v in core if color[v] == 1)))
    dets = [l_tilde(f, ForestPair(all_edges, side)).determinant
            for side in sides]
    pick = 0 if dets[0] >= dets[1] else 1
    return sides[pick], dets[pick]
