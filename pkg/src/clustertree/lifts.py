"""Girth-raising machinery: covering maps, double covers, common lifts,
regular supergraph embedding, and high-girth regular graph generation.

The end product is ``build_high_girth_ct``: embed the low-girth CT graph
in a regular supergraph, generate a regular graph of the required girth,
take a common lift of the two, and restrict the covering map back to the
CT part. Covering maps never decrease girth, so the restriction is again
a CT graph but with girth at least 2k+1.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass

from .builder import build_low_girth
from .errors import (
    BoundViolatedError,
    ClusterTreeError,
    DegreeMismatchError,
    EmptyGraphError,
    IterationLimitError,
    NotBipartiteError,
    NotRegularError,
    SizeCapExceededError,
)
from .graph import Graph, girth, girth_at_least
from .matching import hopcroft_karp
from .skeleton import CTGraph, predicted_sizes

DEFAULT_SIZE_CAP = 5_000_000
SIZE_CAP_ENV = "KMW_SIZE_CAP"


@dataclass(frozen=True)
class CoveringMap:
    """Node map witnessing that ``source`` is a lift of ``target``."""

    source: Graph
    target: Graph
    map: tuple[int, ...]


def verify_covering_map(cm: CoveringMap) -> bool:
    """Check surjectivity, adjacency preservation and local bijectivity.

    Also checks that fiber sizes agree whenever the target is connected
    (they must, by the standard covering-space argument).
    """
    src, tgt, phi = cm.source, cm.target, cm.map
    if len(phi) != src.n:
        return False
    if any(not (0 <= t < tgt.n) for t in phi):
        return False
    fibers = [0] * tgt.n
    for t in phi:
        fibers[t] += 1
    if tgt.n > 0 and min(fibers) == 0:
        return False
    for v in range(src.n):
        images = [phi[w] for w in src.adj[v]]
        if len(set(images)) != len(images):
            return False
        if set(images) != set(tgt.adj[phi[v]]):
            return False
    if tgt.n > 0 and len(tgt.connected_components()) == 1:
        if len(set(fibers)) > 1:
            return False
    return True


def _require_regular(g: Graph) -> int:
    degs = {len(nbrs) for nbrs in g.adj}
    if len(degs) > 1:
        raise NotRegularError(f"degrees {sorted(degs)} are not uniform")
    return degs.pop() if degs else 0


def matching_decomposition(g: Graph) -> list[list[tuple[int, int]]]:
    """Partition a regular bipartite graph's edges into perfect matchings.

    Repeatedly extracts a perfect matching by augmenting paths and removes
    it; the residual graph stays regular bipartite, so Hall's condition
    keeps holding. Returns degree-many matchings of sorted edge pairs.
    """
    colors = g.two_coloring()
    if colors is None:
        raise NotBipartiteError("matching decomposition needs a bipartite graph")
    delta = _require_regular(g)
    left = [v for v in range(g.n) if colors[v] == 0]
    remaining = [list(nbrs) for nbrs in g.adj]
    matchings: list[list[tuple[int, int]]] = []
    for _ in range(delta):
        stage = Graph(g.n, [tuple(nbrs) for nbrs in remaining])
        mate = hopcroft_karp(stage, left)
        if len(mate) != g.n:
            raise ClusterTreeError(
                "regular bipartite graph lost its perfect matching; bug"
            )
        matching = sorted(
            (u, mate[u]) if u < mate[u] else (mate[u], u) for u in left
        )
        matchings.append(matching)
        for u, v in matching:
            remaining[u].remove(v)
            remaining[v].remove(u)
    return matchings


def canonical_double_cover(g: Graph) -> tuple[Graph, CoveringMap]:
    """Tensor product with K_2: node (v, b) becomes index b*n + v.

    The output is bipartite, preserves regularity, and covers ``g`` by
    forgetting the bit.
    """
    n = g.n
    edges: list[tuple[int, int]] = []
    for u, v in g.edges():
        edges.append((u, n + v))
        edges.append((v, n + u))
    cover = Graph.from_edges(2 * n, edges)
    cm = CoveringMap(
        source=cover, target=g, map=tuple(i % n for i in range(2 * n))
    )
    return cover, cm


def common_lift(
    h: Graph, h_prime: Graph
) -> tuple[Graph, CoveringMap, CoveringMap]:
    """Common lift of two regular graphs of the same degree.

    Non-bipartite inputs are replaced by their canonical double covers.
    Both bipartite graphs are decomposed into perfect matchings M_i and
    M'_i, and the lift lives on the node pairs: (v, w) and (v', w') are
    adjacent iff for some i, {v, v'} is in M_i and {w, w'} is in M'_i.
    """
    d1 = _require_regular(h)
    d2 = _require_regular(h_prime)
    if d1 != d2:
        raise DegreeMismatchError(f"degrees differ: {d1} vs {d2}")
    delta = d1

    def bipartite_stage(g: Graph) -> tuple[Graph, tuple[int, ...] | None]:
        if g.two_coloring() is not None:
            return g, None
        cover, cm = canonical_double_cover(g)
        return cover, cm.map

    b1, down1 = bipartite_stage(h)
    b2, down2 = bipartite_stage(h_prime)
    m1 = matching_decomposition(b1)
    m2 = matching_decomposition(b2)
    n1, n2 = b1.n, b2.n

    edges: list[tuple[int, int]] = []
    for i in range(delta):
        partner2 = [0] * n2
        for w, w2 in m2[i]:
            partner2[w] = w2
            partner2[w2] = w
        for v, v2 in m1[i]:
            base_v = v * n2
            base_v2 = v2 * n2
            for w in range(n2):
                edges.append((base_v + w, base_v2 + partner2[w]))
    lifted = Graph.from_edges(n1 * n2, edges)

    def project(first: bool) -> CoveringMap:
        if first:
            raw = [idx // n2 for idx in range(n1 * n2)]
            down, target = down1, h
        else:
            raw = [idx % n2 for idx in range(n1 * n2)]
            down, target = down2, h_prime
        if down is not None:
            raw = [down[x] for x in raw]
        return CoveringMap(source=lifted, target=target, map=tuple(raw))

    cm1 = project(True)
    cm2 = project(False)
    for cm, base in ((cm1, h), (cm2, h_prime)):
        if not verify_covering_map(cm):
            raise ClusterTreeError("constructed projection is not a covering map")
        base_girth = girth(base)
        if not isinstance(base_girth, int):
            continue
        if not girth_at_least(lifted, base_girth):
            raise ClusterTreeError("lift decreased girth; bug")
    return lifted, cm1, cm2


def regular_supergraph(g: Graph) -> tuple[Graph, tuple[int, ...]]:
    """Embed ``g`` in a regular graph of degree max_degree(g).

    Construction: (1) greedily join non-adjacent deficient node pairs;
    the leftovers form a clique of size at most the degree. (2) Attach a
    complete bipartite gadget carrying one perfect matching per leftover
    node and splice matching edges to absorb even deficiencies. (3) Pair
    up nodes still missing one edge through their matchings' last-column
    edges. (4) A single leftover node (degree must be odd then) is fixed
    with a second, slightly smaller gadget plus a perfect matching.

    Adds fewer than 4 * degree nodes. The embedding is the identity on
    the original indices.
    """
    delta = g.max_degree()
    if delta == 0:
        raise EmptyGraphError("cannot regularize a graph with no edges")
    adj: list[set[int]] = [set(nbrs) for nbrs in g.adj]
    deg = [len(a) for a in adj]

    def add_edge(u: int, w: int) -> None:
        assert u != w and w not in adj[u]
        adj[u].add(w)
        adj[w].add(u)
        deg[u] += 1
        deg[w] += 1

    def new_node() -> int:
        adj.append(set())
        deg.append(0)
        return len(adj) - 1

    deficient = [v for v in range(g.n) if deg[v] < delta]
    # one lexicographic pass is maximal: degrees only grow, so a skipped
    # pair can never become addable later
    for i, v in enumerate(deficient):
        if deg[v] == delta:
            continue
        for w in deficient[i + 1 :]:
            if deg[v] == delta:
                break
            if deg[w] < delta and w not in adj[v]:
                add_edge(v, w)

    leftovers = [v for v in deficient if deg[v] < delta]
    if leftovers:
        assert len(leftovers) <= delta
        # K_{delta,delta} gadget; matching i pairs l_x with r_y, (x-y) % delta == i
        lnodes = [new_node() for _ in range(delta)]
        rnodes = [new_node() for _ in range(delta)]
        for lx in lnodes:
            for ry in rnodes:
                add_edge(lx, ry)

        def gadget_edge(mi: int, x: int) -> tuple[int, int]:
            # edge of matching mi containing l_x (1-based column x)
            y = (x - mi) % delta
            y = delta if y == 0 else y
            return lnodes[x - 1], rnodes[y - 1]

        match_of = {v: i for i, v in enumerate(leftovers)}
        for v in leftovers:
            for x in range(1, (delta - deg[v]) // 2 + 1):
                lx, ry = gadget_edge(match_of[v], x)
                adj[lx].remove(ry)
                adj[ry].remove(lx)
                deg[lx] -= 1
                deg[ry] -= 1
                add_edge(v, lx)
                add_edge(v, ry)

        odd = [v for v in leftovers if deg[v] < delta]
        assert all(deg[v] == delta - 1 for v in odd)
        for v, w in zip(odd[0::2], odd[1::2]):
            lx, ry = gadget_edge(match_of[v], delta)
            adj[lx].remove(ry)
            adj[ry].remove(lx)
            deg[lx] -= 1
            deg[ry] -= 1
            add_edge(w, lx)
            add_edge(v, ry)

        if len(odd) % 2 == 1:
            v = odd[-1]
            # only possible for odd degree: the number of odd-degree nodes
            # in any graph is even
            assert delta % 2 == 1
            lnodes2 = [new_node() for _ in range(delta)]
            rnodes2 = [new_node() for _ in range(delta - 1)]
            for lx in lnodes2:
                for ry in rnodes2:
                    add_edge(lx, ry)
            add_edge(v, lnodes2[0])
            rest = lnodes2[1:]
            for a, b in zip(rest[0::2], rest[1::2]):
                add_edge(a, b)

    out = Graph(len(adj), [tuple(sorted(nbrs)) for nbrs in adj])
    if out.max_degree() != delta or any(len(a) != delta for a in out.adj):
        raise ClusterTreeError("supergraph construction failed to regularize; bug")
    if out.n >= g.n + 4 * delta:
        raise ClusterTreeError("supergraph exceeded its size bound; bug")
    return out, tuple(range(g.n))


def high_girth_regular(delta: int, girth_target: int, m: int) -> Graph:
    """A delta-regular graph on 2m nodes with girth at least girth_target.

    Requires m >= 2 * sum((delta-1)^i, i=0..girth_target-2). Starting from
    the cycle on 2m nodes, degrees are raised one level at a time: add an
    edge between two deficient nodes at distance >= girth_target - 1
    whenever possible; otherwise locate an edge with both endpoints far
    from the two smallest deficient nodes, delete it, and reconnect its
    endpoints to them. Every step reduces total deficiency by two, so the
    process terminates; the exchange argument guarantees a usable edge
    always exists, and a defensive cap turns any violation into an error
    instead of a hang.
    """
    if delta < 2:
        raise ValueError("degree must be at least 2")
    if girth_target < 3:
        raise ValueError("girth target must be at least 3")
    min_m = 2 * sum((delta - 1) ** i for i in range(girth_target - 1))
    if m < min_m:
        raise BoundViolatedError(
            f"m={m} is below the required minimum {min_m} for "
            f"delta={delta}, girth>={girth_target}"
        )
    n = 2 * m
    adj: list[set[int]] = [set() for _ in range(n)]
    for v in range(n):
        adj[v].add((v + 1) % n)
        adj[(v + 1) % n].add(v)

    def bfs_ball(starts: list[int], radius: int) -> set[int]:
        dist = {s: 0 for s in starts}
        queue = deque(starts)
        while queue:
            u = queue.popleft()
            if dist[u] >= radius:
                continue
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return set(dist)

    def distances_from(s: int) -> dict[int, int]:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    far = n + 1  # stands in for infinite distance between components

    for target in range(3, delta + 1):
        ops = 0
        cap = 4 * m + 16
        while True:
            deficient = [v for v in range(n) if len(adj[v]) < target]
            if not deficient:
                break
            ops += 1
            if ops > cap:
                raise IterationLimitError(
                    "degree-raising loop exceeded its defensive cap; bug"
                )
            # best addable pair: maximum pairwise distance, then smallest pair
            best_pair: tuple[int, int] | None = None
            best_dist = -1
            dset = set(deficient)
            for u in deficient:
                dist = distances_from(u)
                for v in deficient:
                    if v <= u or v in adj[u]:
                        continue
                    d = dist.get(v, far)
                    if d > best_dist or (
                        d == best_dist and (u, v) < best_pair
                    ):
                        best_dist = d
                        best_pair = (u, v)
            if best_pair is not None and best_dist >= girth_target - 1:
                u, v = best_pair
                adj[u].add(v)
                adj[v].add(u)
                continue
            # stuck: swap an edge remote from the two smallest deficient nodes
            vp, wp = deficient[0], deficient[1]
            ball = bfs_ball([vp], girth_target - 2) | bfs_ball(
                [wp], girth_target - 2
            )
            swap = None
            for x in range(n):
                if x in ball:
                    continue
                for y in adj[x]:
                    if y > x and y not in ball:
                        swap = (x, y)
                        break
                if swap:
                    break
            if swap is None:
                raise IterationLimitError(
                    "no swappable edge outside the deficient balls; bug"
                )
            x, y = swap
            adj[x].remove(y)
            adj[y].remove(x)
            adj[x].add(vp)
            adj[vp].add(x)
            adj[y].add(wp)
            adj[wp].add(y)

    out = Graph(n, [tuple(sorted(nbrs)) for nbrs in adj])
    if any(len(nbrs) != delta for nbrs in out.adj):
        raise IterationLimitError("output is not regular; bug")
    if not girth_at_least(out, girth_target):
        raise IterationLimitError("output girth fell below the target; bug")
    return out


def _resolve_cap(size_cap: int | None) -> int:
    if size_cap is not None:
        return size_cap
    env = os.environ.get(SIZE_CAP_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_SIZE_CAP


def estimate_pipeline_size(k: int, beta: int) -> int:
    """Upper bound on the common-lift node count for (k, beta).

    Both factors may need a double cover, hence the factor 4 on the
    product of the supergraph bound and the minimal high-girth order.
    """
    pred = predicted_sizes(k, beta)
    delta = pred.max_degree
    m_min = 2 * sum((delta - 1) ** i for i in range(2 * k))
    return 4 * (pred.n + 4 * delta) * (2 * m_min)


def build_high_girth_ct(
    k: int, beta: int, size_cap: int | None = None
) -> tuple[CTGraph, CoveringMap]:
    """Full pipeline: a CT graph of girth >= 2k+1 plus its covering map
    onto the low-girth instance.

    Stages: low-girth CT graph, regular supergraph, high-girth regular
    graph of the same degree, common lift, restriction of the first
    projection to the CT preimage. Cluster identities pull back along
    the covering map. Raises SizeCapExceededError (with the estimate)
    when the lift would be too large; the cap falls back to the
    KMW_SIZE_CAP environment variable, then to the built-in default.
    """
    cap = _resolve_cap(size_cap)
    estimate = estimate_pipeline_size(k, beta)
    if estimate > cap:
        raise SizeCapExceededError(estimate, cap)

    low = build_low_girth(k, beta)
    base = low.graph
    delta = beta ** (k + 1)
    super_graph, _ = regular_supergraph(base)
    m_min = 2 * sum((delta - 1) ** i for i in range(2 * k))
    high = high_girth_regular(delta, 2 * k + 1, m_min)
    lifted, psi1, _psi2 = common_lift(super_graph, high)

    keep = [v for v in range(lifted.n) if psi1.map[v] < base.n]
    index = {old: new for new, old in enumerate(keep)}
    edges = []
    for u, v in lifted.edges():
        pu, pv = psi1.map[u], psi1.map[v]
        if pu < base.n and pv < base.n and base.has_edge(pu, pv):
            edges.append((index[u], index[v]))
    restricted = Graph.from_edges(len(keep), edges)
    phi = CoveringMap(
        source=restricted,
        target=base,
        map=tuple(psi1.map[old] for old in keep),
    )
    if not verify_covering_map(phi):
        raise ClusterTreeError("restricted projection is not a covering map; bug")
    if not girth_at_least(restricted, 2 * k + 1):
        raise ClusterTreeError("pipeline output girth below 2k+1; bug")
    base_girth = girth(base)
    if isinstance(base_girth, int) and not girth_at_least(restricted, base_girth):
        raise ClusterTreeError("lift decreased girth; bug")
    cluster_of = tuple(low.cluster_of[phi.map[v]] for v in range(restricted.n))
    ct = CTGraph(graph=restricted, skeleton=low.skeleton, cluster_of=cluster_of)
    return ct, phi
