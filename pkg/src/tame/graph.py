"""Undirected simple graphs, triangle enumeration and hypergraph incidence."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ParseOptions:
    comment: str = "#"
    allow_empty: bool = False


@dataclass(frozen=True)
class ParseReport:
    duplicates: int = 0
    self_loops: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected simple graph with string labels and dense 0-based indices.

    ``adjacency[i]`` is the sorted tuple of neighbours of ``i`` and ``edges``
    holds each edge once as ``(i, j)`` with ``i < j``.
    """

    labels: tuple[str, ...]
    adjacency: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]
    report: ParseReport = field(default_factory=ParseReport, compare=False)
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})
        if len(self._index) != len(self.labels):
            raise InputError("graph labels must be unique")

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]],
                   report: ParseReport | None = None) -> "Graph":
        n = len(labels)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        canon = set()
        for i, j in edges:
            if i == j:
                raise InputError(f"self-loop on node {labels[i]}")
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"edge ({i}, {j}) out of range")
            nbrs[i].add(j)
            nbrs[j].add(i)
            canon.add((min(i, j), max(i, j)))
        adjacency = tuple(tuple(sorted(s)) for s in nbrs)
        return cls(tuple(labels), adjacency, frozenset(canon), report or ParseReport())

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown label {label}") from None

    def has_label(self, label: str) -> bool:
        return label in self._index

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> tuple[int, ...]:
        return self.adjacency[i]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.labels == other.labels and self.edges == other.edges

    def __hash__(self):
        return hash((self.labels, self.edges))


def parse_graph(text: str, options: ParseOptions | None = None) -> Graph:
    """Parse a whitespace-separated edge list.

    Labels are assigned indices in order of first appearance. Duplicate edges
    and self-loops are dropped and counted in ``Graph.report``; a node that
    only occurs in a self-loop is not created.
    """
    options = options or ParseOptions()
    index: dict[str, int] = {}
    labels: list[str] = []
    edges: set[tuple[int, int]] = set()
    dups = loops = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(options.comment, 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected two labels, got {len(parts)} fields")
        a, b = parts
        if a == b:
            loops += 1
            continue
        for lab in (a, b):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
        i, j = index[a], index[b]
        key = (min(i, j), max(i, j))
        if key in edges:
            dups += 1
        else:
            edges.add(key)
    if not labels and not options.allow_empty:
        raise InputError("graph is empty")
    if dups or loops:
        logger.warning("dropped %d duplicate edge(s) and %d self-loop(s)", dups, loops)
    return Graph.from_edges(labels, edges, ParseReport(dups, loops))


def read_graph(path, options: ParseOptions | None = None) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), options)


def format_graph(g: Graph) -> str:
    """Serialize as an edge list; isolated nodes cannot be represented and are lost."""
    return "".join(f"{g.labels[i]}\t{g.labels[j]}\n" for i, j in g.sorted_edges())


@dataclass(frozen=True, eq=False)
class TriangleSet:
    """Triangles of a graph, each stored once as ``(i, j, k)`` with ``i < j < k``.

    ``incidence[i]`` lists the pairs ``(j, k)``, ``j < k``, closing a triangle
    with ``i``. The arrays ``anchor``, ``first``, ``second`` flatten the
    incidence (sorted by anchor) for the vectorized kernels.
    """

    node_count: int
    triangles: tuple[tuple[int, int, int], ...]
    incidence: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def from_triangles(cls, node_count: int, triangles: Iterable[tuple[int, int, int]]) -> "TriangleSet":
        tris = sorted({tuple(sorted(t)) for t in triangles})
        inc: list[list[tuple[int, int]]] = [[] for _ in range(node_count)]
        for i, j, k in tris:
            inc[i].append((j, k))
            inc[j].append((i, k))
            inc[k].append((i, j))
        return cls(node_count, tuple(tris), tuple(tuple(sorted(p)) for p in inc))

    def __len__(self):
        return len(self.triangles)

    def __eq__(self, other):
        if not isinstance(other, TriangleSet):
            return NotImplemented
        return self.node_count == other.node_count and self.triangles == other.triangles

    def __hash__(self):
        return hash((self.node_count, self.triangles))

    @property
    def triangle_set(self) -> frozenset:
        cached = self.__dict__.get("_set")
        if cached is None:
            cached = frozenset(self.triangles)
            object.__setattr__(self, "_set", cached)
        return cached

    def contains(self, i: int, j: int, k: int) -> bool:
        return tuple(sorted((i, j, k))) in self.triangle_set

    def flat_incidence(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        cached = self.__dict__.get("_flat")
        if cached is None:
            rows = [(i, j, k) for i, pairs in enumerate(self.incidence) for j, k in pairs]
            arr = np.array(rows, dtype=np.intp).reshape(-1, 3)
            cached = (arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())
            object.__setattr__(self, "_flat", cached)
        return cached

    def members(self) -> np.ndarray:
        """Boolean mask of nodes that lie on at least one triangle."""
        mask = np.zeros(self.node_count, dtype=bool)
        for i, pairs in enumerate(self.incidence):
            mask[i] = bool(pairs)
        return mask


def enumerate_triangles(g: Graph) -> TriangleSet:
    """List every triangle once using the compact-forward scheme.

    Nodes are ranked by (degree, index); each edge is oriented from lower to
    higher rank and triangles are found by intersecting forward neighbour
    lists, so the work stays near O(m^1.5) on sparse graphs.
    """
    n = g.node_count
    rank = sorted(range(n), key=lambda v: (len(g.adjacency[v]), v))
    pos = [0] * n
    for r, v in enumerate(rank):
        pos[v] = r
    forward = [set() for _ in range(n)]
    for i, j in g.edges:
        if pos[i] < pos[j]:
            forward[i].add(j)
        else:
            forward[j].add(i)
    found = []
    for u in range(n):
        fu = forward[u]
        for v in fu:
            for w in fu & forward[v]:
                found.append((u, v, w))
    return TriangleSet.from_triangles(n, found)


def brute_force_triangles(g: Graph) -> list[tuple[int, int, int]]:
    """All-triples reference count; cubic, for testing only."""
    return [t for t in combinations(range(g.node_count), 3)
            if g.has_edge(t[0], t[1]) and g.has_edge(t[1], t[2]) and g.has_edge(t[0], t[2])]


@dataclass(frozen=True)
class Footprint:
    full_bytes: int
    reduced_bytes: int

    @property
    def full_terabytes(self) -> float:
        return self.full_bytes / 2**40

    @property
    def reduced_terabytes(self) -> float:
        return self.reduced_bytes / 2**40


def product_tensor_footprint(tA: TriangleSet | int, tB: TriangleSet | int,
                             bytes_per_index: int = 4) -> Footprint:
    """Bytes needed to store the Kronecker triangle tensor as a coordinate list.

    Each pair of triangles yields 36 ordered nonzeros with three indices each.
    The reduced figure stores one nonzero per triangle pair. Terabyte
    properties use binary units (2**40 bytes).
    """
    if bytes_per_index < 1:
        raise ValueError("bytes_per_index must be >= 1")
    na = tA if isinstance(tA, int) else len(tA)
    nb = tB if isinstance(tB, int) else len(tB)
    per_nnz = 3 * int(bytes_per_index)
    reduced = int(na) * int(nb) * per_nnz
    return Footprint(full_bytes=36 * reduced, reduced_bytes=reduced)
