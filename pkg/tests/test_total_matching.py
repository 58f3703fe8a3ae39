import itertools
import random

import pytest

from totmatch.errors import BoundExceededError, SizeCapError
from totmatch.graphs import Graph, generate
from totmatch.matching import (PathInstance, TotalMatching, is_total_matching,
                               solve_brute, solve_fpt, solve_paths_dp,
                               total_matching_weight)

from conftest import (feasible_selection, naive_best_total_matching,
                      random_graph_with_elements)


def test_membership_examples():
    c3 = generate("cycle", {"n": 3})
    assert is_total_matching(c3, TotalMatching((3,), (1,), 0))
    edge = Graph.build(2, [(1, 2)])
    assert not is_total_matching(edge, TotalMatching((1, 2), (), 0))
    p3 = generate("path", {"n": 3})
    assert is_total_matching(p3, TotalMatching((1,), (2,), 0))
    assert not is_total_matching(p3, TotalMatching((1,), (1,), 0))  # endpoint
    assert not is_total_matching(p3, TotalMatching((1, 2), (), 0))  # adjacent
    assert not is_total_matching(p3, TotalMatching((), (1, 2), 0))  # share v2


def test_membership_agrees_with_direct_constraint_check():
    for seed in range(30):
        g = random_graph_with_elements(8, seed=seed)
        elems = [("v", v) for v in range(1, g.n + 1)] + \
                [("e", i) for i in range(1, g.m + 1)]
        for combo in itertools.chain.from_iterable(
                itertools.combinations(elems, k) for k in range(4)):
            vs = tuple(x for kind, x in combo if kind == "v")
            es = tuple(x for kind, x in combo if kind == "e")
            assert is_total_matching(g, TotalMatching(vs, es, 0)) == \
                feasible_selection(g, vs, es)


def test_oracle_examples():
    assert solve_brute(generate("cycle", {"n": 3})).weight == 2
    p4 = solve_brute(generate("path", {"n": 4}))
    assert p4.weight == 3
    assert p4 == TotalMatching((1, 4), (2,), 3)
    single = Graph.build(1, [], vertex_weights=[7])
    assert solve_brute(single).weight == 7
    with pytest.raises(SizeCapError):
        solve_brute(generate("path", {"n": 12}))


def test_oracle_matches_complete_enumeration():
    for seed in range(60):
        g = random_graph_with_elements(10, seed=100 + seed, weighted=True)
        sol = solve_brute(g)
        assert is_total_matching(g, sol)
        assert total_matching_weight(g, sol) == sol.weight
        assert sol.weight == naive_best_total_matching(g)


def test_dp_examples():
    p4 = generate("path", {"n": 4})
    sol = solve_paths_dp([PathInstance.from_path(p4, (1, 2, 3, 4))])
    assert sol.weight == 3 == solve_brute(p4).weight
    edge = Graph.build(2, [(1, 2)])
    sol = solve_paths_dp([PathInstance.from_path(edge, (1, 2), [False, False])])
    assert sol == TotalMatching((), (1,), 1)
    p3 = generate("path", {"n": 3})
    sol = solve_paths_dp([PathInstance.from_path(p3, (1, 2, 3), [True, False, True])])
    assert sol == TotalMatching((1, 3), (), 2)
    assert solve_paths_dp([]).weight == 0


def _restricted_brute(g: Graph, selectable: dict[int, bool]) -> int:
    elems = [("v", v) for v in range(1, g.n + 1) if selectable[v]] + \
            [("e", i) for i in range(1, g.m + 1)]
    best = 0
    for k in range(len(elems) + 1):
        for combo in itertools.combinations(elems, k):
            vs = [x for kind, x in combo if kind == "v"]
            es = [x for kind, x in combo if kind == "e"]
            if feasible_selection(g, vs, es):
                best = max(best, sum(g.vertex_weight(v) for v in vs) +
                           sum(g.edge_weight(i) for i in es))
    return best


def test_dp_matches_restricted_brute_force():
    for seed in range(300):
        rng = random.Random(seed)
        n = rng.randint(1, 8)
        g = Graph.build(
            n, [(i, i + 1, rng.randint(-5, 5)) for i in range(1, n)],
            vertex_weights=[rng.randint(-5, 5) for _ in range(n)])
        flags = [rng.random() < 0.7 for _ in range(g.n)]
        sol = solve_paths_dp(
            [PathInstance.from_path(g, tuple(range(1, g.n + 1)), flags)])
        selectable = {v: flags[v - 1] for v in range(1, g.n + 1)}
        assert sol.weight == _restricted_brute(g, selectable), seed
        assert is_total_matching(g, sol)
        assert all(selectable[v] for v in sol.chosen_vertices)
        assert total_matching_weight(g, sol) == sol.weight


def test_fpt_examples():
    p6 = generate("path", {"n": 6})
    assert solve_fpt(p6, 1).weight == solve_brute(p6).weight
    assert solve_fpt(generate("cycle", {"n": 5}), 2).weight == 3
    spider = generate("spider", {"b": 3, "l": 2})
    assert solve_fpt(spider, 8).weight == solve_brute(spider).weight
    with pytest.raises(BoundExceededError) as err:
        solve_fpt(generate("cycle", {"n": 5}), 1)
    assert err.value.certificate is not None


def test_fpt_matches_oracle_on_weighted_graphs():
    from totmatch.subdet import max_subdet_brute
    for seed in range(60):
        g = random_graph_with_elements(12, seed=9000 + seed, weighted=True)
        bound = max_subdet_brute(g).value
        fpt = solve_fpt(g, bound)
        assert is_total_matching(g, fpt)
        assert total_matching_weight(g, fpt) == fpt.weight
        assert fpt.weight == solve_brute(g).weight, seed


def test_isolated_positive_vertex_adds_exactly_its_weight():
    for seed in range(20):
        g = random_graph_with_elements(10, seed=400 + seed, weighted=True)
        before = solve_brute(g).weight
        bigger = Graph(n=g.n + 1, vertex_weights=g.vertex_weights + (6,),
                       edges=g.edges)
        assert solve_brute(bigger).weight == before + 6


def test_all_negative_weights_select_nothing():
    g = Graph.build(3, [(1, 2, -2), (2, 3, -1)], vertex_weights=[-1, -3, -2])
    assert solve_brute(g) == TotalMatching((), (), 0)
    assert solve_fpt(g, 1) == TotalMatching((), (), 0)
    sol = solve_paths_dp([PathInstance.from_path(g, (1, 2, 3))])
    assert sol == TotalMatching((), (), 0)
