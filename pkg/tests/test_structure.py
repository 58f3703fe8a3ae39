import random

import pytest

from totmatch.errors import InputError, PreconditionError
from totmatch.graphs import Graph, classify_paths_and_cycles, generate
from totmatch.structure import (CycleCertificate, Decomposition,
                                DegreeCertificate, DeltaOutcome,
                                NearPencilCertificate, SubdetCertificate,
                                compute_decomposition, contract_degree2_run,
                                format_certificate, near_pencil_lower_bound,
                                recognize, shrink_to_core, verify_certificate)
from totmatch.subdet import max_subdet_brute

from conftest import (disjoint_union, graph_with_degree2_run,
                      random_graph_with_elements)


def test_near_pencil_lower_bound_examples():
    spider = generate("spider", {"b": 3, "l": 2})
    assert near_pencil_lower_bound(spider, [2, 3, 4]) == 8
    assert near_pencil_lower_bound(generate("star", {"k": 3}), [1]) == 2
    assert near_pencil_lower_bound(spider, []) == 1
    with pytest.raises(PreconditionError):
        near_pencil_lower_bound(generate("path", {"n": 3}), [1])  # one neighbor
    with pytest.raises(InputError):
        near_pencil_lower_bound(spider, [99])


def test_decomposition_on_paths_is_empty():
    d = compute_decomposition(generate("path", {"n": 100}), 1)
    assert isinstance(d, Decomposition)
    assert d.Z == () and d.cut_size == 0
    assert d.residual.graph.n == 100


def test_decomposition_cycle_certificate():
    c5 = generate("cycle", {"n": 5})
    outcome = compute_decomposition(c5, 1)
    assert outcome.kind == "exceeds"
    assert isinstance(outcome.certificate, CycleCertificate)
    assert verify_certificate(c5, outcome.certificate, 1)


def test_decomposition_degree_certificate():
    star = generate("star", {"k": 9})
    outcome = compute_decomposition(star, 2)
    assert isinstance(outcome.certificate, DegreeCertificate)
    assert outcome.certificate.degree == 9
    assert verify_certificate(star, outcome.certificate, 2)
    assert not verify_certificate(star, outcome.certificate, 8)


def test_decomposition_near_pencil_certificate():
    # Eight degree-3 vertices push 2^|X| above bound^7 for bound = 2, while
    # no single degree exceeds bound + 1 = 3.
    g = disjoint_union(generate("spider", {"b": 3, "l": 2}),
                       generate("spider", {"b": 3, "l": 2}))
    outcome = compute_decomposition(g, 2)
    assert outcome.kind == "exceeds"
    assert isinstance(outcome.certificate, NearPencilCertificate)
    assert verify_certificate(g, outcome.certificate, 2)


def test_decomposition_structure_on_spider():
    spider = generate("spider", {"b": 3, "l": 2})
    d = compute_decomposition(spider, 8)
    assert d.Z == (1, 2, 3, 4) == d.X
    assert d.Y == ()
    assert d.residual.graph.n == 6 and d.residual.graph.m == 0
    assert d.cut_size == 6
    assert len(d.attachments) == 6


def test_decomposition_invariants_on_random_graphs():
    for seed in range(120):
        g = random_graph_with_elements(14, seed=6000 + seed)
        bound = random.Random(seed).randint(1, 4)
        outcome = compute_decomposition(g, bound)
        if isinstance(outcome, DeltaOutcome):
            assert outcome.kind == "exceeds"
            assert verify_certificate(g, outcome.certificate, bound)
            continue
        assert set(outcome.Z) == set(outcome.X) | set(outcome.Y)
        assert not set(outcome.X) & set(outcome.Y)
        cls = classify_paths_and_cycles(outcome.residual.graph)
        assert cls.cycles == ()
        assert outcome.cut_size <= (bound + 1) * max(len(outcome.Z), 1)
        assert outcome.cut_size == sum(len(a) for a in outcome.attachments)


def test_contraction_examples():
    c6 = contract_degree2_run(generate("cycle", {"n": 12}))
    assert (c6.n, c6.m) == (6, 6)
    assert max_subdet_brute(c6).value == 2
    p14 = contract_degree2_run(generate("path", {"n": 20}))
    assert (p14.n, p14.m) == (14, 13)
    assert contract_degree2_run(generate("path", {"n": 8})) is None
    # 7- and 8-cycles contain runs but both outer neighbors collide.
    assert contract_degree2_run(generate("cycle", {"n": 7})) is None
    assert contract_degree2_run(generate("cycle", {"n": 8})) is None


def test_contraction_preserves_value():
    for seed in range(12):
        g = graph_with_degree2_run(post_elements=10, seed=7000 + seed)
        post = contract_degree2_run(g)
        assert post is not None
        assert max_subdet_brute(g, cap=24).value == \
            max_subdet_brute(post, cap=14).value


def test_shrink_to_core_examples():
    mixed = disjoint_union(generate("path", {"n": 50}),
                           generate("spider", {"b": 3, "l": 2}))
    core = shrink_to_core(mixed, 8)
    assert (core.n, core.m) == (10, 9)
    c100 = generate("cycle", {"n": 100})
    core = shrink_to_core(c100, 3)
    assert (core.n, core.m) == (4, 4)
    assert max_subdet_brute(core).value == 3  # value preserved from C_100


def test_recognize_examples():
    assert recognize(generate("path", {"n": 10}), 1) == \
        DeltaOutcome(kind="exact", value=1)
    out = recognize(generate("cycle", {"n": 7}), 2)
    assert out.kind == "exceeds"
    assert recognize(generate("cycle", {"n": 6}), 2).value == 2
    with pytest.raises(InputError):
        recognize(generate("path", {"n": 3}), 0)


def test_recognize_matches_oracle_with_certificates():
    for seed in range(80):
        g = random_graph_with_elements(14, seed=8000 + seed)
        delta = max_subdet_brute(g).value
        exact = recognize(g, delta)
        assert exact.kind == "exact" and exact.value == delta
        # A generous bound must not change the value.
        assert recognize(g, delta + 3).value == delta
        if delta >= 2:
            below = recognize(g, delta - 1)
            assert below.kind == "exceeds"
            assert verify_certificate(g, below.certificate, delta - 1)


def test_recognize_product_certificate_spans_components():
    g = disjoint_union(generate("cycle", {"n": 4}), generate("cycle", {"n": 5}))
    out = recognize(g, 4)  # delta = 3 * 3 = 9
    assert out.kind == "exceeds"
    assert isinstance(out.certificate, SubdetCertificate)
    assert verify_certificate(g, out.certificate, 4)


def test_certificate_serialization_mentions_kind_and_value():
    out = recognize(generate("spider", {"b": 3, "l": 2}), 7)
    text = format_certificate(out.certificate)
    assert text.startswith("certificate: subdeterminant_found")
    assert "value: 8" in text
