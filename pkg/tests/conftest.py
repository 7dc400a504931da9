from __future__ import annotations

import random

import pytest

from clustertree.builder import build_low_girth
from clustertree.graph import Graph


@pytest.fixture(scope="session")
def g14():
    return build_low_girth(1, 4)


@pytest.fixture(scope="session")
def g16():
    return build_low_girth(1, 16)


@pytest.fixture(scope="session")
def g26():
    return build_low_girth(2, 6)


def make_random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return Graph.from_edges(n, edges)


@pytest.fixture(scope="session")
def small_corpus():
    """50 sparse random graphs on at most 40 nodes, fixed seed."""
    rng = random.Random(42)
    out = []
    for _ in range(50):
        n = rng.randrange(8, 41)
        p = rng.uniform(1.2, 3.2) / n
        out.append(make_random_graph(rng, n, p))
    return out
