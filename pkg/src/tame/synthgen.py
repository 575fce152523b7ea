"""Duplication-mutation-complementation network pairs with known correspondences."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError
from .graph import Graph, enumerate_triangles, format_graph
from .metrics import GroundTruth, format_truth
from .similarity import SimilarityMatrix, format_similarity


@dataclass(frozen=True)
class GenConfig:
    ancestor_size: int = 200
    size_a: int = 300
    size_b: int = 400
    dup_prob: float = 0.9
    edge_keep_prob: float = 0.6
    complement_prob: float = 0.4
    noise_pairs_per_node: float = 1.0
    seed: int = 0

    def __post_init__(self):
        for name in ("dup_prob", "edge_keep_prob", "complement_prob"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InputError(f"{name} must lie in [0, 1], got {value}")
        if self.noise_pairs_per_node < 0:
            raise InputError("noise_pairs_per_node must be nonnegative")
        if self.ancestor_size < 3:
            raise InputError("ancestor_size must be at least 3 (the seed triangle)")
        if self.ancestor_size > min(self.size_a, self.size_b):
            raise InputError("ancestor_size cannot exceed either graph size")


@dataclass(frozen=True)
class BenchmarkPair:
    graph_a: Graph
    graph_b: Graph
    truth: GroundTruth
    sim: SimilarityMatrix


def _grow(adj: list[set[int]], target: int, cfg: GenConfig, rng: np.random.Generator):
    """Add nodes until ``target``.

    With probability ``dup_prob`` a random node is duplicated: the child keeps
    each parent edge with ``edge_keep_prob`` and links to the parent with
    ``complement_prob``. Otherwise the new node attaches to one random node.
    A child that ends up isolated is linked to its parent.
    """
    while len(adj) < target:
        parent = int(rng.integers(len(adj)))
        child = len(adj)
        nbrs = set()
        if rng.random() < cfg.dup_prob:
            for v in sorted(adj[parent]):
                if rng.random() < cfg.edge_keep_prob:
                    nbrs.add(v)
            if rng.random() < cfg.complement_prob or not nbrs:
                nbrs.add(parent)
        else:
            nbrs.add(parent)
        adj.append(set(nbrs))
        for v in nbrs:
            adj[v].add(child)


def _to_graph(adj: list[set[int]], prefix: str, order: np.ndarray) -> Graph:
    """Relabel so that internal indices carry no information about ancestry."""
    n = len(adj)
    new_index = np.empty(n, dtype=np.intp)
    new_index[order] = np.arange(n)
    labels = [f"{prefix}{int(order[k])}" for k in range(n)]
    edges = [(int(new_index[u]), int(new_index[v])) for u in range(n) for v in adj[u] if u < v]
    return Graph.from_edges(labels, edges)


def generate(cfg: GenConfig) -> BenchmarkPair:
    """Grow an ancestor from a triangle, copy it, and evolve both copies apart.

    Node ``a{k}`` of graph A and ``b{k}`` of graph B descend from ancestor
    node ``k`` for ``k < ancestor_size``. Each true pair gets similarity in
    ``[1, 1.5]``; spurious pairs get weights in ``(0, 1)``.
    """
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed & (2**64 - 1)))
    ancestor: list[set[int]] = [{1, 2}, {0, 2}, {0, 1}]
    _grow(ancestor, cfg.ancestor_size, cfg, rng)
    adj_a = [set(s) for s in ancestor]
    adj_b = [set(s) for s in ancestor]
    _grow(adj_a, cfg.size_a, cfg, rng)
    _grow(adj_b, cfg.size_b, cfg, rng)
    order_a = rng.permutation(cfg.size_a)
    order_b = rng.permutation(cfg.size_b)
    ga = _to_graph(adj_a, "a", order_a)
    gb = _to_graph(adj_b, "b", order_b)

    truth = GroundTruth.from_pairs(
        (ga.index(f"a{k}"), gb.index(f"b{k}")) for k in range(cfg.ancestor_size))
    entries = []
    for i, ip in sorted(truth.pairs):
        entries.append((i, ip, 1.0 + 0.5 * rng.random()))
    whole, frac = divmod(cfg.noise_pairs_per_node, 1.0)
    for i in range(ga.node_count):
        count = int(whole) + (1 if rng.random() < frac else 0)
        for _ in range(count):
            ip = int(rng.integers(gb.node_count))
            entries.append((i, ip, float(rng.uniform(np.nextafter(0.0, 1.0), 1.0))))
    sim = SimilarityMatrix.from_entries(ga.node_count, gb.node_count, entries)
    return BenchmarkPair(ga, gb, truth, sim)


def summarize(p: BenchmarkPair) -> dict[str, tuple[int, int, int]]:
    """(nodes, edges, triangles) for each side."""
    out = {}
    for name, g in (("graph_a", p.graph_a), ("graph_b", p.graph_b)):
        out[name] = (g.node_count, g.edge_count, len(enumerate_triangles(g)))
    return out


def write_pair(p: BenchmarkPair, directory) -> dict[str, Path]:
    """Write ``graph_a.txt``, ``graph_b.txt``, ``sim.tsv`` and ``truth.tsv``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {
        "graph_a": directory / "graph_a.txt",
        "graph_b": directory / "graph_b.txt",
        "sim": directory / "sim.tsv",
        "truth": directory / "truth.tsv",
    }
    paths["graph_a"].write_text(format_graph(p.graph_a), encoding="utf-8")
    paths["graph_b"].write_text(format_graph(p.graph_b), encoding="utf-8")
    paths["sim"].write_text(format_similarity(p.sim, p.graph_a, p.graph_b), encoding="utf-8")
    paths["truth"].write_text(format_truth(p.truth, p.graph_a, p.graph_b), encoding="utf-8")
    return paths
