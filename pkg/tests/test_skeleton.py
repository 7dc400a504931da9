from __future__ import annotations

import pytest

from clustertree.graph import Graph
from clustertree.skeleton import (
    CTGraph,
    INTERNAL,
    LEAF,
    build_skeleton,
    cluster_count,
    predicted_sizes,
    skeleton_from_json_dict,
    skeleton_to_dot,
    skeleton_to_json_dict,
    validate_ct_graph,
)


def simulate_growth_levels(k: int) -> list[int]:
    """Independent re-simulation of the growth rules, counting only.

    Tracks clusters as (level, exponent-to-parent) and a leaf flag; no
    ids, no edges. Serves as the oracle for the closed-form counts.
    """
    # base: root, two level-1 clusters, one level-2 cluster
    internal_levels = [0, 1]  # root and the level-1 internal cluster
    leaves = [(1, 2), (2, 1)]  # (level, exponent toward parent)
    for r in range(2, k + 1):
        new_leaves = []
        for level in internal_levels:
            new_leaves.append((level + 1, r + 1))
        for level, q in leaves:
            for p in range(r + 1):
                if p != q:
                    new_leaves.append((level + 1, p + 1))
        internal_levels.extend(level for level, _ in leaves)
        leaves = new_leaves
    counts = [0] * (k + 3)
    for level in internal_levels:
        counts[level] += 1
    for level, _ in leaves:
        counts[level] += 1
    return counts


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_closed_form_matches_growth_simulation(k):
    oracle = simulate_growth_levels(k)
    for l in range(k + 3):
        assert cluster_count(k, l) == oracle[l]


@pytest.mark.parametrize("k,beta", [(1, 4), (2, 6), (3, 8), (4, 10), (5, 12), (6, 14)])
def test_builder_matches_closed_form(k, beta):
    skel = build_skeleton(k, beta)
    counts = skel.level_counts()
    for l, c in enumerate(counts):
        assert c == cluster_count(k, l)
    assert len(skel.clusters) == sum(counts)


def test_base_skeleton_structure():
    skel = build_skeleton(1, 4)
    assert [c.level for c in skel.clusters] == [0, 1, 1, 2]
    assert [(e.a, e.b, e.exp_a, e.exp_b) for e in skel.edges] == [
        (0, 1, 0, 1),
        (0, 2, 1, 2),
        (1, 3, 0, 1),
    ]
    assert skel.clusters[0].position == INTERNAL
    assert skel.clusters[1].position == INTERNAL
    assert skel.clusters[2].position == LEAF
    assert skel.clusters[3].position == LEAF


def test_cluster_count_point_values():
    assert [cluster_count(1, l) for l in (0, 1, 2)] == [1, 2, 1]
    assert cluster_count(1, 3) == 0
    for k in range(1, 7):
        assert cluster_count(k, k + 2) == 0
    assert cluster_count(2, 2) == 4  # matches the growth simulation
    assert simulate_growth_levels(2)[2] == 4


def test_skeleton_by_level_examples():
    assert build_skeleton(2, 6).level_counts() == [1, 3, 4, 2]
    skel3 = build_skeleton(3, 8)
    assert len(skel3.clusters) == 32
    assert skel3.level_counts() == [1, 4, 9, 12, 6]


def test_internal_clusters_have_full_exponent_range():
    for k, beta in ((2, 6), (3, 8), (4, 10)):
        skel = build_skeleton(k, beta)
        for c in skel.clusters:
            exps = sorted(skel.out_label[c.id])
            if c.position == INTERNAL:
                assert exps == list(range(k + 1))
            else:
                assert len(exps) == 1


def test_internal_clusters_are_previous_generation():
    # the growth rules only attach leaves, so the internal clusters of
    # the k-skeleton are exactly the clusters of the (k-1)-skeleton
    for k, beta in ((2, 6), (3, 8), (4, 10)):
        cur = build_skeleton(k, beta)
        prev = build_skeleton(k - 1, beta)
        internal_ids = {c.id for c in cur.clusters if c.position == INTERNAL}
        assert internal_ids == {c.id for c in prev.clusters}
        for c in prev.clusters:
            assert cur.clusters[c.id].level == c.level
            assert cur.clusters[c.id].parent == c.parent


def test_beta_too_small_rejected():
    with pytest.raises(ValueError):
        build_skeleton(1, 3)
    with pytest.raises(ValueError):
        build_skeleton(2, 5)
    with pytest.raises(ValueError):
        predicted_sizes(3, 7)


def test_predicted_sizes_examples():
    p = predicted_sizes(1, 4)
    # 64 + 2*16 + 4 across the four clusters
    assert (p.n0, p.n, p.max_degree) == (64, 100, 16)
    assert p.level_sizes == (64, 16, 4)
    p = predicted_sizes(1, 16)
    # 4096 + 2*256 + 16
    assert (p.n0, p.n, p.max_degree) == (4096, 4624, 256)


@pytest.mark.parametrize(
    "k,beta", [(1, 4), (1, 16), (2, 6), (3, 8), (4, 100), (6, 14)]
)
def test_predicted_sizes_order_bounds(k, beta):
    p = predicted_sizes(k, beta)
    assert p.total_bound_ok
    assert p.excess_bound_ok
    # same inequalities, spelled out in exact integer arithmetic
    assert p.n * (beta - (k + 1)) < p.n0 * beta
    assert (p.n - p.n0) * beta < p.n0 * 2 * (k + 1)


def test_predicted_sizes_big_integers_exact():
    p = predicted_sizes(6, 40)
    assert p.n0 == 40**13
    assert p.level_sizes[7] == 40**6
    assert p.n == sum(
        cluster_count(6, l) * 40 ** (13 - l) for l in range(8)
    )


def test_skeleton_json_round_trip():
    for k, beta in ((1, 4), (2, 6), (3, 8)):
        skel = build_skeleton(k, beta)
        doc = skeleton_to_json_dict(skel)
        back = skeleton_from_json_dict(doc)
        assert back.k == skel.k and back.beta == skel.beta
        assert back.clusters == skel.clusters
        assert back.edges == skel.edges
        assert back.out_label == skel.out_label


def test_skeleton_dot_has_port_style_labels():
    text = skeleton_to_dot(build_skeleton(1, 4))
    assert 'taillabel="0"' in text and 'headlabel="1"' in text


def test_validate_accepts_built_graph(g14):
    assert validate_ct_graph(g14).ok


def test_validate_flags_missing_edge(g14):
    g = g14.graph
    # drop one cluster-0 / cluster-1 edge
    u = 0
    v = next(w for w in g.adj[0] if g14.cluster_of[w] == 1)
    edges = [e for e in g.edges() if e != (u, v)]
    broken = CTGraph(
        graph=Graph.from_edges(g.n, edges),
        skeleton=g14.skeleton,
        cluster_of=g14.cluster_of,
    )
    report = validate_ct_graph(broken)
    assert not report.ok
    text = str(report)
    assert "biregularity" in text
    # both endpoints are flagged
    assert f"({u}, " in text and f"({v}, " in text


def test_validate_flags_intra_cluster_edge(g14):
    g = g14.graph
    edges = g.edges() + [(0, 1)]  # both nodes lie in cluster 0
    broken = CTGraph(
        graph=Graph.from_edges(g.n, edges),
        skeleton=g14.skeleton,
        cluster_of=g14.cluster_of,
    )
    report = validate_ct_graph(broken)
    assert not report.ok
    assert any(v.constraint == "independence" for v in report.violations)


def test_validate_flags_stray_and_size_violations(g14):
    g = g14.graph
    # an edge between cluster 1 and cluster 2 has no skeleton counterpart
    c1 = next(v for v in range(g.n) if g14.cluster_of[v] == 1)
    c2 = next(v for v in range(g.n) if g14.cluster_of[v] == 2)
    broken = CTGraph(
        graph=Graph.from_edges(g.n, g.edges() + [(c1, c2)]),
        skeleton=g14.skeleton,
        cluster_of=g14.cluster_of,
    )
    report = validate_ct_graph(broken)
    assert any(v.constraint == "stray-edges" for v in report.violations)

    relabeled = list(g14.cluster_of)
    relabeled[0] = 1  # cluster sizes no longer divide by beta
    report = validate_ct_graph(
        CTGraph(graph=g, skeleton=g14.skeleton, cluster_of=tuple(relabeled))
    )
    assert any(v.constraint == "size-ratio" for v in report.violations)
