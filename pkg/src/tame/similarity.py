"""Sparse cross-graph prior similarity and the pruning filter used by cTAME."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import InputError
from .graph import Graph, TriangleSet


@dataclass(frozen=True, eq=False)
class SimilarityMatrix:
    """Nonnegative weights between nodes of G (rows) and H (columns).

    Entries are stored as parallel arrays sorted by ``(row, col)`` with at
    most one entry per pair. Explicit zeros are allowed but never count as
    support.
    """

    nrows: int
    ncols: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.intp)
        cols = np.asarray(self.cols, dtype=np.intp)
        weights = np.asarray(self.weights, dtype=float)
        if not (rows.shape == cols.shape == weights.shape):
            raise InputError("similarity arrays must have equal length")
        if rows.size:
            if rows.min() < 0 or rows.max() >= self.nrows or cols.min() < 0 or cols.max() >= self.ncols:
                raise InputError("similarity index out of range")
            if weights.min() < 0 or not np.all(np.isfinite(weights)):
                raise InputError("similarity weights must be finite and nonnegative")
        order = np.lexsort((cols, rows))
        rows, cols, weights = rows[order], cols[order], weights[order]
        if rows.size > 1:
            same = (rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])
            if same.any():
                raise InputError("duplicate similarity entries")
        for name, arr in (("rows", rows), ("cols", cols), ("weights", weights)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries) -> "SimilarityMatrix":
        """Build from ``(i, i', w)`` triples; repeated pairs keep the largest weight."""
        best: dict[tuple[int, int], float] = {}
        for i, ip, wt in entries:
            key = (int(i), int(ip))
            wt = float(wt)
            if key not in best or wt > best[key]:
                best[key] = wt
        if best:
            keys = np.array(list(best.keys()), dtype=np.intp)
            vals = np.array(list(best.values()), dtype=float)
            return cls(nrows, ncols, keys[:, 0], keys[:, 1], vals)
        return cls(nrows, ncols, np.empty(0, np.intp), np.empty(0, np.intp), np.empty(0))

    @classmethod
    def from_dense(cls, W) -> "SimilarityMatrix":
        W = np.asarray(W, dtype=float)
        r, c = np.nonzero(W)
        return cls(W.shape[0], W.shape[1], r, c, W[r, c])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return int(np.count_nonzero(self.weights))

    def __len__(self):
        return int(self.rows.size)

    def to_dense(self) -> np.ndarray:
        W = np.zeros(self.shape)
        W[self.rows, self.cols] = self.weights
        return W

    def to_csr(self) -> sparse.csr_matrix:
        return sparse.csr_matrix((self.weights, (self.rows, self.cols)), shape=self.shape)

    def to_vec(self) -> np.ndarray:
        return vec(self.to_dense())

    def lookup(self) -> dict[tuple[int, int], float]:
        return {(int(i), int(j)): float(v) for i, j, v in zip(self.rows, self.cols, self.weights)}

    def scaled(self, factor: float) -> "SimilarityMatrix":
        return SimilarityMatrix(self.nrows, self.ncols, self.rows, self.cols, self.weights * factor)


def vec(X: np.ndarray) -> np.ndarray:
    """Stack columns, so pair ``(i, i')`` lands at ``i' * nG + i``."""
    return np.asarray(X).ravel(order="F")


def unvec(x: np.ndarray, nrows: int, ncols: int) -> np.ndarray:
    return np.asarray(x).reshape((nrows, ncols), order="F")


def vec_index(i: int, ip: int, nrows: int) -> int:
    return ip * nrows + i


def parse_similarity(text: str, graph_a: Graph, graph_b: Graph, comment: str = "#") -> SimilarityMatrix:
    """Parse ``labelA labelB weight`` lines (tab or whitespace separated)."""
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(comment, 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"line {lineno}: expected 'labelA labelB weight'")
        a, b, wt = parts
        if not graph_a.has_label(a):
            raise InputError(f"line {lineno}: unknown label {a}")
        if not graph_b.has_label(b):
            raise InputError(f"line {lineno}: unknown label {b}")
        try:
            value = float(wt)
        except ValueError:
            raise InputError(f"line {lineno}: bad weight {wt!r}") from None
        if not np.isfinite(value) or value < 0:
            raise InputError(f"line {lineno}: weight must be finite and nonnegative, got {wt}")
        entries.append((graph_a.index(a), graph_b.index(b), value))
    return SimilarityMatrix.from_entries(graph_a.node_count, graph_b.node_count, entries)


def read_similarity(path, graph_a: Graph, graph_b: Graph) -> SimilarityMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_similarity(fh.read(), graph_a, graph_b)


def format_similarity(w: SimilarityMatrix, graph_a: Graph, graph_b: Graph) -> str:
    return "".join(f"{graph_a.labels[i]}\t{graph_b.labels[j]}\t{float(v)!r}\n"
                   for i, j, v in zip(w.rows, w.cols, w.weights))


def normalize_unit(w: SimilarityMatrix) -> SimilarityMatrix:
    peak = float(w.weights.max(initial=0.0))
    if peak == 0.0:
        raise InputError("similarity matrix has no nonzero entry")
    # scale first so tiny weights do not underflow the norm
    scaled = w.weights / peak
    return SimilarityMatrix(w.nrows, w.ncols, w.rows, w.cols, scaled / np.linalg.norm(scaled))


@dataclass(frozen=True)
class IndicatorPair:
    rows: np.ndarray
    cols: np.ndarray


def indicators(w: SimilarityMatrix) -> IndicatorPair:
    rows = np.zeros(w.nrows, dtype=bool)
    cols = np.zeros(w.ncols, dtype=bool)
    keep = w.weights > 0
    rows[w.rows[keep]] = True
    cols[w.cols[keep]] = True
    return IndicatorPair(rows, cols)


def constrain_triangles(t: TriangleSet, ind) -> TriangleSet:
    """Keep only triangles whose three endpoints all have a true indicator."""
    ind = np.asarray(ind, dtype=bool)
    if ind.shape != (t.node_count,):
        raise InputError(f"indicator length {ind.shape[0]} does not match {t.node_count} nodes")
    kept = [tri for tri in t.triangles if ind[tri[0]] and ind[tri[1]] and ind[tri[2]]]
    return TriangleSet.from_triangles(t.node_count, kept)
