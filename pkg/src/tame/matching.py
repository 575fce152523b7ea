"""Bipartite matchings between the node sets of two graphs and their scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import sparse
from scipy.optimize import linear_sum_assignment

from .errors import InputError
from .graph import Graph, TriangleSet


@dataclass(frozen=True)
class Matching:
    """One-to-one partial map from nodes of G to nodes of H."""

    pairs: tuple[tuple[int, int], ...]
    weight_total: float = 0.0

    def __post_init__(self):
        pairs = tuple(sorted((int(i), int(j)) for i, j in self.pairs))
        left = [i for i, _ in pairs]
        right = [j for _, j in pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise InputError("matching is not one-to-one")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], weights=None) -> "Matching":
        pairs = list(pairs)
        total = 0.0
        if weights is not None:
            W = _dense(weights)
            total = float(sum(W[i, j] for i, j in pairs))
        return cls(tuple(pairs), total)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)

    def inverse(self) -> dict[int, int]:
        return {j: i for i, j in self.pairs}

    def indicator(self, nrows: int, ncols: int, dtype=np.int64) -> np.ndarray:
        X = np.zeros((nrows, ncols), dtype=dtype)
        for i, j in self.pairs:
            X[i, j] = 1
        return X


@dataclass(frozen=True)
class BMatching:
    edges: frozenset[tuple[int, int]]
    b: int
    weight_total: float = 0.0

    def __len__(self):
        return len(self.edges)


def _dense(weights) -> np.ndarray:
    if sparse.issparse(weights):
        return np.asarray(weights.toarray(), dtype=float)
    if hasattr(weights, "to_dense"):
        return weights.to_dense()
    return np.asarray(weights, dtype=float)


def max_weight_matching(weights) -> Matching:
    """Exact maximum-weight one-to-one matching.

    Negative weights are clipped to zero and zero-weight pairs are dropped
    from the result. Rectangular inputs are handled directly by the solver.
    """
    W = _dense(weights)
    if W.ndim != 2:
        raise InputError("weight matrix must be two-dimensional")
    if not np.all(np.isfinite(W)):
        raise InputError("weight matrix has non-finite entries")
    W = np.maximum(W, 0.0)
    if W.size == 0:
        return Matching(())
    r, c = linear_sum_assignment(W, maximize=True)
    keep = W[r, c] > 0
    pairs = tuple(zip(r[keep].tolist(), c[keep].tolist()))
    return Matching(pairs, float(W[r[keep], c[keep]].sum()))


def greedy_matching(weights) -> Matching:
    """Half-approximate matching; cheap stand-in for the exact solver."""
    bm = greedy_b_matching(weights, 1)
    return Matching(tuple(bm.edges), bm.weight_total)


def greedy_b_matching(weights, b: int | None) -> BMatching:
    """Scan positive edges by descending weight, keeping those with spare capacity.

    ``b=None`` means unlimited capacity. Ties are broken by (row, col). The
    result weighs at least half of the optimal b-matching.
    """
    if b is not None and b < 1:
        raise InputError("b must be a positive integer")
    if sparse.issparse(weights):
        coo = sparse.coo_matrix(weights)
        shape = coo.shape
        r, c, v = coo.row, coo.col, coo.data.astype(float)
    elif hasattr(weights, "to_dense"):
        shape = weights.shape
        r, c, v = weights.rows, weights.cols, weights.weights
    else:
        W = np.asarray(weights, dtype=float)
        shape = W.shape
        r, c = np.nonzero(W > 0)
        v = W[r, c]
    pos = v > 0
    r, c, v = r[pos], c[pos], v[pos]
    order = np.lexsort((c, r, -v))
    if b is None:
        edges = frozenset(zip(r.tolist(), c.tolist()))
        return BMatching(edges, 0, float(v.sum()))
    load_r = np.zeros(shape[0], dtype=np.int64)
    load_c = np.zeros(shape[1], dtype=np.int64)
    chosen = []
    total = 0.0
    full_r = full_c = 0
    for e in order.tolist():
        i, j = int(r[e]), int(c[e])
        if load_r[i] < b and load_c[j] < b:
            chosen.append((i, j))
            total += float(v[e])
            load_r[i] += 1
            load_c[j] += 1
            full_r += load_r[i] == b
            full_c += load_c[j] == b
            if full_r == shape[0] or full_c == shape[1]:
                break
    return BMatching(frozenset(chosen), b, total)


def score_triangles(m: Matching, tG: TriangleSet, tH: TriangleSet) -> int:
    """Number of triangles of G whose image under ``m`` is a triangle of H."""
    fwd = m.as_dict()
    if len(tG) <= len(tH):
        src, dst, mapping = tG, tH, fwd
    else:
        src, dst, mapping = tH, tG, m.inverse()
    target = dst.triangle_set
    count = 0
    for i, j, k in src.triangles:
        a, b, c = mapping.get(i), mapping.get(j), mapping.get(k)
        if a is None or b is None or c is None:
            continue
        if tuple(sorted((a, b, c))) in target:
            count += 1
    return count


def random_matching(n_left: int, n_right: int, rng: np.random.Generator) -> Matching:
    """Uniformly random maximal matching; the baseline for node-correctness tests."""
    k = min(n_left, n_right)
    left = rng.permutation(n_left)[:k]
    right = rng.permutation(n_right)[:k]
    return Matching(tuple(zip(left.tolist(), right.tolist())))


def format_matching(m: Matching, graph_a: Graph, graph_b: Graph, X=None) -> str:
    """Serialize as ``labelA<TAB>labelB<TAB>x_weight`` lines."""
    lines = []
    for i, j in m.pairs:
        wt = float(X[i, j]) if X is not None else 1.0
        lines.append(f"{graph_a.labels[i]}\t{graph_b.labels[j]}\t{wt:.17g}\n")
    return "".join(lines)


def parse_matching(text: str, graph_a: Graph, graph_b: Graph) -> Matching:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'labelA labelB [weight]'")
        pairs.append((graph_a.index(parts[0]), graph_b.index(parts[1])))
    return Matching(tuple(pairs))
