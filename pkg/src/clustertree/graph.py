"""Simple undirected graphs over dense integer node indices.

Everything downstream (skeleton instantiation, lifts, view extraction)
runs on this representation. Graphs are immutable after construction and
safe to share between threads. Adjacency lists are kept sorted ascending
and every iteration order in this module is ascending-index, so all
constructions are reproducible bit for bit.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable


class InfiniteGirth:
    """Sentinel for the girth of an acyclic graph.

    Compares greater than every integer and equal only to itself.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "Infinite"

    def __eq__(self, other) -> bool:
        return isinstance(other, InfiniteGirth)

    def __hash__(self) -> int:
        return hash("InfiniteGirth")

    def __gt__(self, other) -> bool:
        return not isinstance(other, InfiniteGirth)

    def __ge__(self, other) -> bool:
        return True

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return isinstance(other, InfiniteGirth)


INFINITE = InfiniteGirth()


class Graph:
    """Simple undirected graph: no self-loops, no parallel edges."""

    __slots__ = ("n", "adj", "_edge_cache")

    def __init__(self, n: int, adj: list[tuple[int, ...]]):
        """Build from a pre-validated adjacency structure.

        Use :meth:`from_edges` unless the adjacency is known to be simple,
        symmetric and sorted.
        """
        self.n = n
        self.adj = adj
        self._edge_cache: list[tuple[int, int]] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph on nodes ``0..n-1`` from an edge list.

        Rejects self-loops, duplicate edges and out-of-range endpoints.
        """
        if n < 0:
            raise ValueError("node count must be nonnegative")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        return cls(n, [tuple(sorted(nbrs)) for nbrs in adj])

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(nbrs) for nbrs in self.adj), default=0)

    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, sorted lexicographically."""
        if self._edge_cache is None:
            self._edge_cache = [
                (u, v) for u in range(self.n) for v in self.adj[u] if u < v
            ]
        return self._edge_cache

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def bfs_distances(self, source: int, cutoff: int | None = None) -> dict[int, int]:
        """Hop distances from ``source`` to every reachable node.

        With ``cutoff`` set, only nodes within that many hops are returned.
        """
        dist = {source: 0}
        queue = deque([source])
        while queue:
            u = queue.popleft()
            d = dist[u]
            if cutoff is not None and d >= cutoff:
                continue
            for w in self.adj[u]:
                if w not in dist:
                    dist[w] = d + 1
                    queue.append(w)
        return dist

    def connected_components(self) -> list[list[int]]:
        """Components as ascending node lists, ordered by smallest member."""
        seen = [False] * self.n
        out: list[list[int]] = []
        for s in range(self.n):
            if seen[s]:
                continue
            comp = [s]
            seen[s] = True
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        queue.append(w)
            comp.sort()
            out.append(comp)
        return out

    def two_coloring(self) -> list[int] | None:
        """A proper 2-coloring (0/1 per node), or None if not bipartite.

        Each component is colored with its smallest node as color 0.
        """
        color: list[int] = [-1] * self.n
        for s in range(self.n):
            if color[s] != -1:
                continue
            color[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                cu = color[u]
                for w in self.adj[u]:
                    if color[w] == -1:
                        color[w] = 1 - cu
                        queue.append(w)
                    elif color[w] == cu:
                        return None
        return color

    def is_forest(self) -> bool:
        seen = [False] * self.n
        for comp in self.connected_components():
            comp_edges = sum(len(self.adj[u]) for u in comp) // 2
            if comp_edges != len(comp) - 1:
                return False
            for u in comp:
                seen[u] = True
        return True


@dataclass(frozen=True)
class RootedSubgraph:
    """A k-hop subgraph: everything within k hops of a root node.

    Edges joining two nodes that are both at the maximum depth are not
    part of the subgraph, so when the host graph has girth at least 2k+1
    the subgraph is a tree.

    ``graph`` is reindexed to dense local indices; ``nodes[i]`` is the
    original index of local node ``i`` and ``nodes[0]`` is the root.
    ``depth_of`` is keyed by original node index.
    """

    graph: Graph
    root: int
    k: int
    nodes: tuple[int, ...]
    depth_of: dict[int, int]

    def node_set(self) -> set[int]:
        return set(self.nodes)

    def edge_set(self) -> set[frozenset[int]]:
        """Edges in original node indices."""
        return {
            frozenset((self.nodes[u], self.nodes[v]))
            for u, v in self.graph.edges()
        }

    def local_index(self) -> dict[int, int]:
        return {orig: i for i, orig in enumerate(self.nodes)}


def k_hop_subgraph(g: Graph, v: int, k: int) -> RootedSubgraph:
    """Extract the k-hop subgraph of ``v``.

    Node set: all nodes at distance <= k from ``v``. Edge set: the induced
    edges minus those whose endpoints are both at distance exactly k.
    """
    if not (0 <= v < g.n):
        raise ValueError(f"node {v} out of range")
    if k < 0:
        raise ValueError("k must be nonnegative")
    depth = g.bfs_distances(v, cutoff=k)
    # (depth, index) order keeps BFS layers contiguous and deterministic
    nodes = [v] + sorted((u for u in depth if u != v), key=lambda u: (depth[u], u))
    index = {orig: i for i, orig in enumerate(nodes)}
    edges = []
    for u in nodes:
        du = depth[u]
        for w in g.adj[u]:
            if u < w and w in depth and not (du == k and depth[w] == k):
                edges.append((index[u], index[w]))
    sub = Graph.from_edges(len(nodes), edges)
    return RootedSubgraph(graph=sub, root=v, k=k, nodes=tuple(nodes), depth_of=depth)


def _shortest_cycle_sweep(
    g: Graph, ceiling: int | None, floor: int = 3
) -> int | None:
    """Length of the shortest cycle strictly below ``ceiling``.

    BFS from every node with the standard shortest-cycle-through-a-node
    bound. With ``ceiling`` None the true girth is returned (None only if
    acyclic); otherwise returns None when no cycle shorter than the
    ceiling exists. ``floor`` is a known lower bound on the girth; the
    sweep stops once it is reached.
    """
    best = ceiling
    found = False
    dist = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if len(g.adj[s]) < 2:
            continue
        touched = [s]
        dist[s] = 0
        parent[s] = s
        queue = deque([s])
        limit = None if best is None else (best + 1) // 2
        while queue:
            u = queue.popleft()
            du = dist[u]
            if limit is not None and du >= limit:
                break
            for w in g.adj[u]:
                if dist[w] == -1:
                    dist[w] = du + 1
                    parent[w] = u
                    touched.append(w)
                    queue.append(w)
                elif w != parent[u] and dist[w] >= du:
                    # non-tree edge closes a cycle through s
                    cand = du + dist[w] + 1
                    if best is None or cand < best:
                        best = cand
                        found = True
                        limit = (best + 1) // 2
        for u in touched:
            dist[u] = -1
            parent[u] = -1
        if found and best <= floor:
            break
    return best if found else None


def girth(g: Graph) -> int | InfiniteGirth:
    """Exact girth: length of the shortest cycle, INFINITE for forests.

    Computed by BFS from every node; stops as soon as the theoretical
    minimum (3, or 4 for bipartite graphs) has been met.
    """
    if g.is_forest():
        return INFINITE
    floor = 4 if g.two_coloring() is not None else 3
    hit = _shortest_cycle_sweep(g, None, floor=floor)
    assert hit is not None
    return hit


def girth_at_least(g: Graph, bound: int) -> bool:
    """True iff girth(g) >= bound, with cheap short-circuits.

    Simple graphs always have girth >= 3; bipartite ones >= 4; forests
    have infinite girth. Beyond that, a bounded sweep looks for any
    cycle shorter than the bound.
    """
    if bound <= 3:
        return True
    if g.is_forest():
        return True
    floor = 3
    if g.two_coloring() is not None:
        if bound <= 4:
            return True
        floor = 4
    return _shortest_cycle_sweep(g, bound, floor=floor) is None


def line_graph(g: Graph) -> tuple[Graph, list[tuple[int, int]]]:
    """Line graph of ``g`` plus the edge-index -> endpoint-pair map.

    Node i of the line graph is edge i of ``g`` (edges in lexicographic
    order); two line nodes are adjacent iff the edges share an endpoint.
    """
    edge_list = g.edges()
    index = {e: i for i, e in enumerate(edge_list)}
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for i, (u, v) in enumerate(edge_list):
        incident[u].append(i)
        incident[v].append(i)
    line_edges = set()
    for ids in incident:
        for a in range(len(ids)):
            for b in range(a + 1, len(ids)):
                e = (ids[a], ids[b]) if ids[a] < ids[b] else (ids[b], ids[a])
                line_edges.add(e)
    lg = Graph.from_edges(len(edge_list), sorted(line_edges))
    return lg, edge_list


# ---------------------------------------------------------------------------
# Persistence: JSON is the single on-disk format, DOT export is write-only.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GraphFile:
    """Contents of a graph JSON file."""

    graph: Graph
    clusters: tuple[int, ...] | None
    meta: dict | None


def graph_to_json_dict(
    g: Graph,
    clusters: Iterable[int] | None = None,
    meta: dict | None = None,
) -> dict:
    doc: dict = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if clusters is not None:
        clusters = list(clusters)
        if len(clusters) != g.n:
            raise ValueError("clusters array must have one entry per node")
        doc["clusters"] = clusters
    if meta is not None:
        doc["meta"] = meta
    return doc


def graph_from_json_dict(doc: dict) -> GraphFile:
    g = Graph.from_edges(doc["n"], [tuple(e) for e in doc["edges"]])
    clusters = tuple(doc["clusters"]) if "clusters" in doc else None
    meta = doc.get("meta")
    return GraphFile(graph=g, clusters=clusters, meta=meta)


def write_graph_json(
    path: str,
    g: Graph,
    clusters: Iterable[int] | None = None,
    meta: dict | None = None,
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(graph_to_json_dict(g, clusters, meta), fh)
        fh.write("\n")


def read_graph_json(path: str) -> GraphFile:
    with open(path, encoding="utf-8") as fh:
        return graph_from_json_dict(json.load(fh))


_LEVEL_COLORS = (
    "#bdd7ff",
    "#c8e6c9",
    "#ffe0b2",
    "#e1bee7",
    "#ffcdd2",
    "#b2dfdb",
    "#f0f4c3",
    "#d7ccc8",
)


def graph_to_dot(
    g: Graph,
    clusters: Iterable[int] | None = None,
    cluster_levels: dict[int, int] | None = None,
    name: str = "G",
) -> str:
    """Render as Graphviz DOT. With cluster info, nodes are grouped into
    same-rank clusters and colored by cluster level."""
    lines = [f"graph {name} {{"]
    if clusters is None:
        for v in range(g.n):
            lines.append(f"  {v};")
    else:
        clusters = list(clusters)
        groups: dict[int, list[int]] = {}
        for v, c in enumerate(clusters):
            groups.setdefault(c, []).append(v)
        for c in sorted(groups):
            level = cluster_levels.get(c, 0) if cluster_levels else 0
            color = _LEVEL_COLORS[level % len(_LEVEL_COLORS)]
            lines.append(f"  subgraph cluster_{c} {{")
            lines.append(f'    label="C{c}";')
            lines.append("    rank=same;")
            lines.append('    style=filled;')
            lines.append(f'    color="{color}";')
            for v in groups[c]:
                lines.append(f"    {v};")
            lines.append("  }")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
