import random

import pytest

from totmatch.errors import InputError, PreconditionError
from totmatch.forests import (ForestPair, bipartition_lower_witness,
                              degree_sequence_bounds, delta_forest_formula,
                              l_tilde, pair_from_witness, pair_witness)
from totmatch.graphs import Graph, generate
from totmatch.matrices import constraint_matrix, extract
from totmatch.subdet import max_subdet_brute, max_subdet_principal, verify_result

from conftest import laplace_det


def test_l_tilde_examples():
    edge = Graph.build(2, [(1, 2)])
    assert l_tilde(edge, ForestPair((1,), (1,))).base.to_lists() == [[0]]
    k13 = generate("star", {"k": 3})
    assert l_tilde(k13, ForestPair((1, 2, 3), (1,))).determinant == 2
    spider = generate("spider", {"b": 3, "l": 2})
    lt = l_tilde(spider, ForestPair(tuple(range(1, 10)), (2, 3, 4)))
    assert lt.base.to_lists() == [[2, 0, 0], [0, 2, 0], [0, 0, 2]]
    assert lt.determinant == 8


def test_l_tilde_validation():
    p3 = generate("path", {"n": 3})
    with pytest.raises(InputError):
        l_tilde(p3, ForestPair((1,), (3,)))  # vertex 3 not on edge 1
    with pytest.raises(InputError):
        l_tilde(generate("cycle", {"n": 3}), ForestPair((1,), (1,)))


def test_formula_examples_and_witnesses():
    assert delta_forest_formula(generate("path", {"n": 5})).value == 1
    spider = generate("spider", {"b": 3, "l": 2})
    res = delta_forest_formula(spider)
    assert res.value == 8
    assert verify_result(spider, res)  # principal witness re-verifies on M(G)
    pair = pair_from_witness(res.witness)
    assert abs(l_tilde(spider, pair).determinant) == 8
    assert delta_forest_formula(generate("star", {"k": 4})).value == 3
    with pytest.raises(PreconditionError):
        delta_forest_formula(generate("cycle", {"n": 4}))


def test_formula_handles_small_components_via_fallback():
    # A component with fewer than 3 vertices disables the restricted scan.
    g = Graph.build(6, [(1, 2), (3, 4), (3, 5), (3, 6)])  # K_2 + K_{1,3}
    assert delta_forest_formula(g).value == max_subdet_brute(g).value


def test_triple_agreement_on_forest_corpus(forest_corpus):
    for f in forest_corpus[:80]:
        a = delta_forest_formula(f).value
        assert a == max_subdet_principal(f).value
        assert a == max_subdet_brute(f, cap=19).value


def test_degree_bound_examples():
    b = degree_sequence_bounds(generate("spider", {"b": 3, "l": 2}))
    assert (b.lower, b.lower_exact_square, b.upper) == (4.0, 16, 81.0)
    b = degree_sequence_bounds(generate("star", {"k": 3}))
    assert b.lower_exact_square == 2 and b.upper == 3.0
    b = degree_sequence_bounds(generate("path", {"n": 10}))
    assert b.lower == 1.0 and b.upper == 2.0 ** 8
    b = degree_sequence_bounds(Graph.build(2, [(1, 2)]))
    assert b.degenerate and (b.lower, b.lower_exact_square, b.upper) == (1, 1, 1)
    with pytest.raises(PreconditionError):
        degree_sequence_bounds(generate("cycle", {"n": 4}))


def test_bipartition_examples():
    side, det = bipartition_lower_witness(generate("spider", {"b": 3, "l": 2}))
    assert det >= 4
    side, det = bipartition_lower_witness(generate("star", {"k": 5}))
    assert side == (1,) and det == 4
    side, det = bipartition_lower_witness(generate("path", {"n": 4}))
    assert det == 1


def test_bounds_sandwich_and_product_identity(forest_corpus):
    for f in forest_corpus:
        delta = delta_forest_formula(f).value
        b = degree_sequence_bounds(f)
        assert b.lower_exact_square <= delta * delta
        assert b.upper_exact >= delta
        side, det = bipartition_lower_witness(f)
        core = set(v for v in range(1, f.n + 1) if f.degree(v) >= 2)
        other = tuple(sorted(core - set(side)))
        all_edges = tuple(range(1, f.m + 1))
        det_other = l_tilde(f, ForestPair(all_edges, other)).determinant
        assert det * det_other == b.lower_exact_square
        assert det * det >= b.lower_exact_square
        assert delta >= det  # the witness really is a lower bound


def test_pair_determinant_equals_principal_minor():
    # The Schur collapse: |det L~| equals |det| of the principal submatrix
    # of the incidence-relation matrix selecting G'' vertices and G' edges.
    rng = random.Random(23)
    checked = 0
    while checked < 100:
        f = generate("random_forest", {"n": rng.randint(2, 9)},
                     seed=rng.randrange(1 << 30))
        if f.m == 0:
            continue
        emask = rng.randrange(1, 1 << f.m)
        edges = tuple(i + 1 for i in range(f.m) if emask >> i & 1)
        onto = sorted({v for i in edges for v in f.edge_endpoints(i)})
        vs = tuple(v for v in onto if rng.random() < 0.6)
        lt = l_tilde(f, ForestPair(edges, vs)).determinant
        m = constraint_matrix(f)
        idx = [v - 1 for v in vs] + [f.n + i - 1 for i in edges]
        minor = laplace_det(tuple(tuple(r) for r in
                                  extract(m, idx, idx).to_lists())) \
            if len(idx) <= 8 else None
        if minor is None:
            continue
        assert abs(minor) == abs(lt)
        checked += 1


def test_pair_witness_round_trip():
    spider = generate("spider", {"b": 3, "l": 2})
    pair = ForestPair((1, 2, 3), (1,))
    assert pair_from_witness(pair_witness(spider, pair)) == pair
