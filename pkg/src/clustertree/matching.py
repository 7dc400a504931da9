"""Bipartite matching support: Hopcroft-Karp and the König cover.

Deterministic throughout: left nodes are scanned ascending and adjacency
is sorted, so the matchings extracted here are reproducible.
"""

from __future__ import annotations

import sys
from collections import deque

from .errors import NotBipartiteError
from .graph import Graph

_INF = float("inf")


def hopcroft_karp(g: Graph, left: list[int]) -> dict[int, int]:
    """Maximum matching of a bipartite graph.

    ``left`` is one side of a bipartition (every edge of ``g`` must have
    exactly one endpoint in it). Returns the matching as a node -> mate
    map containing both directions.
    """
    is_left = [False] * g.n
    for v in left:
        is_left[v] = True
    mate: dict[int, int] = {}
    dist: dict[int, float] = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if u not in mate:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                nxt = mate.get(w)
                if nxt is None:
                    found = True
                elif dist[nxt] == _INF:
                    dist[nxt] = dist[u] + 1
                    queue.append(nxt)
        return found

    def dfs(u: int) -> bool:
        for w in g.adj[u]:
            nxt = mate.get(w)
            if nxt is None or (dist[nxt] == dist[u] + 1 and dfs(nxt)):
                mate[u] = w
                mate[w] = u
                return True
        dist[u] = _INF
        return False

    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, g.n + 100))
    try:
        while bfs():
            for u in left:
                if u not in mate:
                    dfs(u)
    finally:
        sys.setrecursionlimit(old_limit)
    return mate


def bipartition(g: Graph) -> tuple[list[int], list[int]]:
    """Split nodes into the two color classes; raises if not bipartite."""
    colors = g.two_coloring()
    if colors is None:
        raise NotBipartiteError("graph contains an odd cycle")
    left = [v for v in range(g.n) if colors[v] == 0]
    right = [v for v in range(g.n) if colors[v] == 1]
    return left, right


def koenig_cover(g: Graph, left: list[int], mate: dict[int, int]) -> list[int]:
    """Minimum vertex cover from a maximum matching (König).

    Alternating reachability from unmatched left nodes: the cover is the
    unreached left nodes plus the reached right nodes.
    """
    in_left = set(left)
    reached: set[int] = set()
    queue = deque(u for u in left if u not in mate)
    reached.update(queue)
    while queue:
        u = queue.popleft()
        if u in in_left:
            for w in g.adj[u]:
                if mate.get(u) != w and w not in reached:
                    reached.add(w)
                    queue.append(w)
        else:
            m = mate.get(u)
            if m is not None and m not in reached:
                reached.add(m)
                queue.append(m)
    cover = [u for u in left if u not in reached]
    cover.extend(w for w in range(g.n) if w not in in_left and w in reached)
    return sorted(cover)


def greedy_maximal_matching(g: Graph, order=None) -> list[tuple[int, int]]:
    """Maximal matching by scanning edges in the given (default lexicographic) order."""
    used = [False] * g.n
    out = []
    for u, v in order if order is not None else g.edges():
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            out.append((u, v) if u < v else (v, u))
    return out
