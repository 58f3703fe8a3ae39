"""Shared independent oracles for cross-validation.

Everything here is deliberately written from first principles (incidence
definition, cofactor-expansion determinants, direct constraint checks) so
the library's own elimination and search code is never used to validate
itself.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from totmatch.graphs import Graph, generate


# ---------------------------------------------------------------------------
# Independent exact determinants


def laplace_det(rows: tuple[tuple[int, ...], ...]) -> int:
    """Cofactor expansion along the first row, with memoization on the
    (rows, column-selection) pair."""
    memo: dict = {}

    def rec(r: int, cols: tuple[int, ...]) -> int:
        if not cols:
            return 1
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = 0
        sign = 1
        for j, c in enumerate(cols):
            a = rows[r][c]
            if a:
                total += sign * a * rec(r + 1, cols[:j] + cols[j + 1:])
            sign = -sign
        memo[key] = total
        return total

    return rec(0, tuple(range(len(rows))))


def fraction_gauss_det(rows) -> Fraction:
    """Plain Gaussian elimination over Fractions."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return det


# ---------------------------------------------------------------------------
# Independent element-incidence matrix and subdeterminant oracle


def incidence_rows(g: Graph) -> list[list[int]]:
    """The element-incidence matrix written out directly from the
    definition: entry 1 on the diagonal and for vertex-edge endpoint
    pairs, 0 elsewhere. Vertices 1..n first, then edges in input order."""
    size = g.n + g.m
    rows = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    for i in range(1, g.m + 1):
        u, v = g.edge_endpoints(i)
        for x in (u, v):
            rows[x - 1][g.n + i - 1] = 1
            rows[g.n + i - 1][x - 1] = 1
    return rows


def naive_max_subdet(g: Graph) -> int:
    """Max |det| over all square submatrices, by complete enumeration with
    cofactor expansion. Only sensible for n + m <= 8."""
    size = g.n + g.m
    assert size <= 8, "oracle is exponential; keep instances tiny"
    full = incidence_rows(g)
    best = 1  # the empty submatrix
    for k in range(1, size + 1):
        for rows in itertools.combinations(range(size), k):
            sub = tuple(tuple(full[r][c] for c in range(size)) for r in rows)
            for cols in itertools.combinations(range(size), k):
                picked = tuple(tuple(row[c] for c in cols) for row in sub)
                best = max(best, abs(laplace_det(picked)))
    return best


# ---------------------------------------------------------------------------
# Independent total matching oracle


def feasible_selection(g: Graph, vertices, edges) -> bool:
    """Direct check of the constraints x_v + sum_{e at v} y_e <= 1 and
    x_u + x_v + y_{uv} <= 1 for all vertices and edges."""
    vset, eset = set(vertices), set(edges)
    for v in range(1, g.n + 1):
        if (v in vset) + sum(1 for _, i in g.adjacency[v - 1] if i in eset) > 1:
            return False
    for i in range(1, g.m + 1):
        u, v = g.edge_endpoints(i)
        if (u in vset) + (v in vset) + (i in eset) > 1:
            return False
    return True


def naive_best_total_matching(g: Graph) -> int:
    """Best selection weight by complete enumeration over element subsets."""
    elems = [("v", v) for v in range(1, g.n + 1)] + \
            [("e", i) for i in range(1, g.m + 1)]
    assert len(elems) <= 14
    best = 0
    for k in range(1, len(elems) + 1):
        for combo in itertools.combinations(elems, k):
            vs = [x for kind, x in combo if kind == "v"]
            es = [x for kind, x in combo if kind == "e"]
            if feasible_selection(g, vs, es):
                weight = sum(g.vertex_weight(v) for v in vs) + \
                    sum(g.edge_weight(i) for i in es)
                best = max(best, weight)
    return best


# ---------------------------------------------------------------------------
# Corpus helpers


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shift = g1.n
    edges = [e for e in g1.edges]
    edges += [(u + shift, v + shift, w) for (u, v, w) in g2.edges]
    return Graph(n=g1.n + g2.n,
                 vertex_weights=g1.vertex_weights + g2.vertex_weights,
                 edges=tuple(edges))


def random_graph_with_elements(max_elems: int, seed: int,
                               weighted: bool = False,
                               min_elems: int = 1) -> Graph:
    """A random graph with min_elems <= n + m <= max_elems."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(1, max(1, max_elems - 1))
        m_cap = min(max_elems - n, n * (n - 1) // 2)
        if m_cap < 0:
            continue
        m = rng.randint(0, m_cap)
        if n + m < min_elems:
            continue
        params = {"n": n, "m": m}
        if weighted:
            params.update({"wmin": -5, "wmax": 9})
        return generate("random_sparse", params, seed=rng.randrange(1 << 30))


def graph_with_degree2_run(post_elements: int, seed: int,
                           force_forest: bool = False) -> Graph:
    """A graph containing a 7-vertex degree-2 run, built so that one
    contraction lands at no more than `post_elements` elements: draw a base
    graph with at most post_elements - 2 elements and replace one edge by a path
    through 7 new vertices (net +7 vertices, +7 edges; contraction -6/-6
    and the base edge's subdivision vertex stays)."""
    rng = random.Random(seed)
    target = post_elements - 2
    while True:
        if force_forest:
            h = generate("random_forest", {"n": (target + 1) // 2 + 1},
                         seed=rng.randrange(1 << 30))
        else:
            n = rng.randint(3, target - 1)
            m = target - n
            if not (1 <= m <= n * (n - 1) // 2):
                continue
            h = generate("random_sparse", {"n": n, "m": m},
                         seed=rng.randrange(1 << 30))
        if h.m >= 1 and h.num_elements <= target:
            break
    pick = rng.randrange(1, h.m + 1)
    a, b = h.edge_endpoints(pick)
    edges = [e[:2] for i, e in enumerate(h.edges, start=1) if i != pick]
    run = list(range(h.n + 1, h.n + 8))
    edges.append((a, run[0]))
    edges.extend((run[i], run[i + 1]) for i in range(6))
    edges.append((run[6], b))
    return Graph.build(h.n + 7, edges)


@pytest.fixture(scope="session")
def forest_corpus():
    """200 random forests with n <= 10, shared across the forest suites."""
    return [generate("random_forest",
                     {"n": random.Random(9000 + i).randint(1, 10)},
                     seed=9000 + i)
            for i in range(200)]
