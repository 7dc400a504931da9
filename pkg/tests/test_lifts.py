from __future__ import annotations

import pytest

from clustertree.errors import (
    BoundViolatedError,
    DegreeMismatchError,
    EmptyGraphError,
    NotBipartiteError,
    NotRegularError,
    SizeCapExceededError,
)
from clustertree.graph import Graph, INFINITE, girth, girth_at_least
from clustertree.iso import find_isomorphism, verify_isomorphism
from clustertree.lifts import (
    CoveringMap,
    build_high_girth_ct,
    canonical_double_cover,
    common_lift,
    estimate_pipeline_size,
    high_girth_regular,
    matching_decomposition,
    regular_supergraph,
    verify_covering_map,
)
from clustertree.skeleton import validate_ct_graph

C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
K3 = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
K4 = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
K33 = Graph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])
C5 = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
PETERSEN = Graph.from_edges(
    10,
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
     (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
     (0, 5), (1, 6), (2, 7), (3, 8), (4, 9)],
)


# ---------------------------------------------------------------------------
# matching decomposition
# ---------------------------------------------------------------------------


def test_decomposition_c4():
    ms = matching_decomposition(C4)
    assert len(ms) == 2
    assert sorted(len(m) for m in ms) == [2, 2]
    assert sorted(e for m in ms for e in m) == C4.edges()


def test_decomposition_k33():
    ms = matching_decomposition(K33)
    assert len(ms) == 3
    for m in ms:
        assert len(m) == 3
        covered = {x for e in m for x in e}
        assert len(covered) == 6
    assert sorted(e for m in ms for e in m) == K33.edges()


def test_decomposition_rejects_bad_inputs():
    with pytest.raises(NotBipartiteError):
        matching_decomposition(K3)
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    with pytest.raises(NotRegularError):
        matching_decomposition(path)


# ---------------------------------------------------------------------------
# canonical double cover
# ---------------------------------------------------------------------------


def test_double_cover_of_bipartite_splits():
    cover, cm = canonical_double_cover(K33)
    assert cover.n == 12
    comps = cover.connected_components()
    assert len(comps) == 2
    assert all(len(c) == 6 for c in comps)
    assert verify_covering_map(cm)


def test_double_cover_of_triangle_is_hexagon():
    cover, cm = canonical_double_cover(K3)
    assert cover.n == 6
    assert {cover.degree(v) for v in range(6)} == {2}
    assert len(cover.connected_components()) == 1
    assert girth(cover) == 6
    assert verify_covering_map(cm)


def test_double_cover_of_petersen():
    cover, cm = canonical_double_cover(PETERSEN)
    assert cover.n == 20
    assert {cover.degree(v) for v in range(20)} == {3}
    assert cover.two_coloring() is not None
    assert girth_at_least(cover, 5)
    assert verify_covering_map(cm)


# ---------------------------------------------------------------------------
# covering-map verification
# ---------------------------------------------------------------------------


def test_verify_identity_map():
    assert verify_covering_map(CoveringMap(source=K4, target=K4, map=(0, 1, 2, 3)))


def test_verify_cycle_mod_map():
    c6 = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    cm = CoveringMap(source=c6, target=K3, map=tuple(i % 3 for i in range(6)))
    assert verify_covering_map(cm)


def test_verify_rejects_bad_maps():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert not verify_covering_map(CoveringMap(source=k2, target=k2, map=(0, 0)))
    assert not verify_covering_map(CoveringMap(source=k2, target=k2, map=(0,)))
    # adjacency-breaking map
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert not verify_covering_map(
        CoveringMap(source=p3, target=p3, map=(0, 1, 0))
    )
    # right fiber sizes but locally non-bijective (duplicate images
    # inside a neighborhood)
    c6 = Graph.from_edges(6, [(i, (i + 1) % 6) for i in range(6)])
    bad = CoveringMap(source=c6, target=K3, map=(0, 1, 2, 0, 2, 1))
    assert not verify_covering_map(bad)


# ---------------------------------------------------------------------------
# common lift
# ---------------------------------------------------------------------------


def test_common_lift_c4_c4():
    lifted, cm1, cm2 = common_lift(C4, C4)
    assert lifted.n == 16
    assert {lifted.degree(v) for v in range(16)} == {2}
    assert verify_covering_map(cm1)
    assert verify_covering_map(cm2)


def test_common_lift_k4_k33():
    lifted, cm1, cm2 = common_lift(K4, K33)
    assert lifted.n <= 4 * 4 * 6
    assert {lifted.degree(v) for v in range(lifted.n)} == {3}
    assert verify_covering_map(cm1)
    assert verify_covering_map(cm2)
    assert girth_at_least(lifted, 4)


def test_common_lift_degree_mismatch():
    with pytest.raises(DegreeMismatchError):
        common_lift(K4, C5)


def test_common_lift_girth_inheritance():
    # girth of the lift is at least the larger input girth
    for a, b in ((PETERSEN, K33), (PETERSEN, K4), (C4, K3)):
        ga, gb = girth(a), girth(b)
        lifted, cm1, cm2 = common_lift(a, b)
        want = max(x for x in (ga, gb) if x is not INFINITE)
        assert girth_at_least(lifted, want)
        assert verify_covering_map(cm1) and verify_covering_map(cm2)


# ---------------------------------------------------------------------------
# regular supergraph
# ---------------------------------------------------------------------------


def test_supergraph_of_regular_graph_unchanged():
    sg, emb = regular_supergraph(K4)
    assert sg.n == K4.n
    assert sg.edges() == K4.edges()
    assert emb == (0, 1, 2, 3)


def test_supergraph_small_examples():
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    sg, emb = regular_supergraph(p3)
    assert sg.n < 3 + 4 * 2
    assert {sg.degree(v) for v in range(sg.n)} == {2}
    assert emb == (0, 1, 2)
    assert sg.has_edge(0, 1) and sg.has_edge(1, 2)

    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    sg, _ = regular_supergraph(star)
    assert sg.n < 4 + 4 * 3
    assert {sg.degree(v) for v in range(sg.n)} == {3}
    for v in (1, 2, 3):
        assert sg.has_edge(0, v)


def test_supergraph_contains_original_edges(g14):
    sg, emb = regular_supergraph(g14.graph)
    assert emb == tuple(range(100))
    assert sg.n < 100 + 4 * 16
    assert {sg.degree(v) for v in range(sg.n)} == {16}
    original = set(g14.graph.edges())
    assert original <= set(sg.edges())


def test_supergraph_odd_degree_leftover():
    # K_{1,3} plus a pendant chain forces an odd number of odd-deficiency
    # nodes at some point; degree 3 exercises the second gadget
    g = Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)])
    sg, _ = regular_supergraph(g)
    assert {sg.degree(v) for v in range(sg.n)} == {3}
    assert sg.n < 5 + 4 * 3
    assert set(g.edges()) <= set(sg.edges())


def test_supergraph_rejects_empty():
    with pytest.raises(EmptyGraphError):
        regular_supergraph(Graph.from_edges(4, []))


# ---------------------------------------------------------------------------
# high-girth regular generator
# ---------------------------------------------------------------------------


def test_high_girth_degree_two_is_cycle():
    g = high_girth_regular(2, 5, 8)
    assert g.n == 16
    assert {g.degree(v) for v in range(16)} == {2}
    assert len(g.connected_components()) == 1
    assert girth(g) == 16


def test_high_girth_3_5_30():
    g = high_girth_regular(3, 5, 30)
    assert g.n == 60
    assert {g.degree(v) for v in range(60)} == {3}
    assert girth_at_least(g, 5)


def test_high_girth_3_3_6():
    g = high_girth_regular(3, 3, 6)
    assert g.n == 12
    assert {g.degree(v) for v in range(12)} == {3}
    assert girth_at_least(g, 3)


def test_high_girth_deterministic():
    a = high_girth_regular(3, 5, 30)
    b = high_girth_regular(3, 5, 30)
    assert a.edges() == b.edges()


def test_high_girth_bound_violation():
    with pytest.raises(BoundViolatedError):
        high_girth_regular(3, 5, 10)
    with pytest.raises(BoundViolatedError):
        high_girth_regular(4, 6, 100)


def test_high_girth_parameter_sweep():
    for delta in (2, 3, 4, 5):
        for target in (3, 4, 5):
            m = 2 * sum((delta - 1) ** i for i in range(target - 1))
            if 2 * m > 140:
                continue
            out = high_girth_regular(delta, target, m)
            assert all(out.degree(v) == delta for v in range(out.n))
            assert girth_at_least(out, target)


def test_supergraph_random_sweep():
    import random

    rng = random.Random(9)
    checked = 0
    while checked < 60:
        n = rng.randrange(2, 26)
        p = rng.uniform(0.05, 0.5)
        edges = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if rng.random() < p
        ]
        if not edges:
            continue
        g = Graph.from_edges(n, edges)
        delta = g.max_degree()
        sg, emb = regular_supergraph(g)
        assert emb == tuple(range(n))
        assert all(sg.degree(v) == delta for v in range(sg.n))
        assert sg.n < n + 4 * delta
        assert set(g.edges()) <= set(sg.edges())
        checked += 1


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------


@pytest.fixture(scope="module")
def lifted14(g14):
    return build_high_girth_ct(1, 4)


def test_pipeline_output_is_ct_graph(lifted14, g14):
    ct, phi = lifted14
    assert validate_ct_graph(ct).ok
    assert verify_covering_map(phi)
    assert phi.target is not None
    assert phi.target.edges() == g14.graph.edges()


def test_pipeline_fiber_sizes(lifted14):
    ct, phi = lifted14
    assert ct.graph.n % 100 == 0
    t = ct.graph.n // 100
    fibers: dict[int, int] = {}
    for v in range(ct.graph.n):
        fibers[phi.map[v]] = fibers.get(phi.map[v], 0) + 1
    assert set(fibers.values()) == {t}
    c0 = [v for v in range(ct.graph.n) if ct.cluster_of[v] == 0]
    assert len(c0) == t * 64


def test_pipeline_girth(lifted14):
    ct, _ = lifted14
    assert girth_at_least(ct.graph, 3)
    # lifts cannot lose girth relative to the girth-4 base
    assert girth_at_least(ct.graph, 4)


def test_pipeline_views_are_trees(lifted14):
    ct, _ = lifted14
    from clustertree.graph import k_hop_subgraph

    for v in range(0, ct.graph.n, ct.graph.n // 7):
        sub = k_hop_subgraph(ct.graph, v, 1)
        assert sub.graph.edge_count() == len(sub.nodes) - 1


def test_pipeline_with_odd_degree():
    # beta 5 gives degree 25, driving the odd-deficiency gadget of the
    # supergraph step through the whole stack
    ct, phi = build_high_girth_ct(1, 5)
    assert ct.graph.n % 180 == 0
    assert validate_ct_graph(ct).ok
    assert verify_covering_map(phi)
    v0 = ct.cluster_of.index(0)
    v1 = ct.cluster_of.index(1)
    phi_iso = find_isomorphism(ct, 1, v0, v1)
    assert verify_isomorphism(ct, 1, v0, v1, phi_iso)


def test_pipeline_size_cap():
    with pytest.raises(SizeCapExceededError) as exc:
        build_high_girth_ct(2, 6)
    assert exc.value.estimate >= exc.value.cap
    assert exc.value.estimate == estimate_pipeline_size(2, 6)


def test_pipeline_cap_from_environment(monkeypatch):
    monkeypatch.setenv("KMW_SIZE_CAP", "100")
    with pytest.raises(SizeCapExceededError) as exc:
        build_high_girth_ct(1, 4)
    assert exc.value.cap == 100


def test_pipeline_explicit_cap_argument(monkeypatch):
    # the argument wins over the environment
    monkeypatch.setenv("KMW_SIZE_CAP", "10000000000000")
    with pytest.raises(SizeCapExceededError) as exc:
        build_high_girth_ct(1, 4, size_cap=10)
    assert exc.value.cap == 10
