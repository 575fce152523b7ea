from itertools import combinations

import numpy as np
import pytest
from hypothesis import strategies as st

from tame.graph import Graph, enumerate_triangles


def graph_from_edges(n, edges, prefix="v"):
    return Graph.from_edges([f"{prefix}{i}" for i in range(n)], edges)


def complete_graph(n, prefix="v"):
    return graph_from_edges(n, combinations(range(n), 2), prefix)


def random_graph(n, p, rng, prefix="v"):
    edges = [e for e in combinations(range(n), 2) if rng.random() < p]
    return graph_from_edges(n, edges, prefix)


def brute_triangles(g):
    """Cubic all-triples check; independent of the enumeration under test."""
    adj = np.zeros((g.node_count, g.node_count), dtype=bool)
    for i, j in g.edges:
        adj[i, j] = adj[j, i] = True
    return sorted(t for t in combinations(range(g.node_count), 3)
                  if adj[t[0], t[1]] and adj[t[1], t[2]] and adj[t[0], t[2]])


@st.composite
def graphs(draw, min_nodes=1, max_nodes=12):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return graph_from_edges(n, [e for e, keep in zip(pairs, mask) if keep])


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k3_tri(k3):
    return enumerate_triangles(k3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
