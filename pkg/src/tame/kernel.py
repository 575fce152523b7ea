"""Tensor-times-vector products with the Kronecker triangle tensor of two graphs.

The product tensor pairs every triangle of G with every triangle of H and is
never formed. ``imp_ttv`` evaluates it from the two incidence lists;
``explicit_ttv_oracle`` materializes it and exists to check the former.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from itertools import permutations

import numpy as np

from .errors import InputError, OracleLimitError
from .graph import TriangleSet
from .similarity import unvec, vec

# Elements of the per-chunk pair-product block; bounds kernel scratch memory.
CHUNK_ELEMENTS = 1 << 21
ORACLE_LIMIT = 10**6


def _check_shape(tG: TriangleSet, tH: TriangleSet, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X)
    if X.shape != (tG.node_count, tH.node_count):
        raise InputError(f"iterate has shape {X.shape}, expected "
                         f"({tG.node_count}, {tH.node_count})")
    return X


def _group_starts(anchor: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    starts = np.flatnonzero(np.r_[True, anchor[1:] != anchor[:-1]])
    return anchor[starts], starts


def _chunks(g_starts: np.ndarray, total: int, width: int) -> list[tuple[int, int, int, int]]:
    """Split incidence rows at anchor boundaries; the split ignores thread count."""
    max_rows = max(1, CHUNK_ELEMENTS // max(width, 1))
    bounds = list(g_starts) + [total]
    out = []
    gi = 0
    ngroups = len(g_starts)
    while gi < ngroups:
        gj = gi + 1
        while gj < ngroups and bounds[gj + 1] - bounds[gi] <= max_rows:
            gj += 1
        out.append((gi, gj, bounds[gi], bounds[gj]))
        gi = gj
    return out


def imp_ttv(tG: TriangleSet, tH: TriangleSet, X: np.ndarray, threads: int = 1) -> np.ndarray:
    """Return ``Y = unvec(T x^2)`` for the implicit product tensor ``T``.

    ``Y[i, i'] = 2 * sum over (j,k) in inc_G(i), (j',k') in inc_H(i') of
    X[j,j']X[k,k'] + X[j,k']X[k,j']``. Integer input stays integer. Rows of
    ``Y`` are partitioned into fixed chunks, so the result is identical for
    any ``threads``.
    """
    X = _check_shape(tG, tH, X)
    Y = np.zeros(X.shape, dtype=np.result_type(X.dtype, np.int8))
    gi, gj, gk = tG.flat_incidence()
    hi, hj, hk = tH.flat_incidence()
    if gi.size == 0 or hi.size == 0:
        return Y
    g_nodes, g_starts = _group_starts(gi)
    h_nodes, h_starts = _group_starts(hi)

    def work(chunk):
        a, b, lo, hi_ = chunk
        Xj = X[gj[lo:hi_]]
        Xk = X[gk[lo:hi_]]
        P = Xj[:, hj] * Xk[:, hk] + Xj[:, hk] * Xk[:, hj]
        Q = np.add.reduceat(P, h_starts, axis=1)
        R = np.add.reduceat(Q, g_starts[a:b] - lo, axis=0)
        Y[np.ix_(g_nodes[a:b], h_nodes)] = 2 * R

    chunks = _chunks(g_starts, gi.size, hi.size)
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, chunks))
    else:
        for c in chunks:
            work(c)
    return Y


def contract_cubic(tG: TriangleSet, tH: TriangleSet, X: np.ndarray, threads: int = 1):
    """Scalar form ``T x^3``; six times the conserved triangles for a 0/1 matching."""
    X = _check_shape(tG, tH, X)
    Y = imp_ttv(tG, tH, X, threads=threads)
    total = np.sum(X * Y)
    return total.item() if hasattr(total, "item") else total


def explicit_coordinates(tG: TriangleSet, tH: TriangleSet) -> np.ndarray:
    """All ordered nonzeros of the product tensor as rows of three vec indices."""
    if len(tG) * len(tH) > ORACLE_LIMIT:
        raise OracleLimitError(
            f"{len(tG)} x {len(tH)} triangle pairs exceeds oracle limit {ORACLE_LIMIT}")
    nG = tG.node_count
    pg = np.array([p for t in tG.triangles for p in permutations(t)], dtype=np.intp).reshape(-1, 3)
    ph = np.array([p for t in tH.triangles for p in permutations(t)], dtype=np.intp).reshape(-1, 3)
    # pair index ii' = i' * nG + i
    coords = ph[None, :, :] * nG + pg[:, None, :]
    return coords.reshape(-1, 3)


def explicit_ttv_oracle(tG: TriangleSet, tH: TriangleSet, X: np.ndarray) -> np.ndarray:
    """Materialize the product tensor and apply it entry by entry."""
    X = _check_shape(tG, tH, X)
    x = vec(X)
    coords = explicit_coordinates(tG, tH)
    y = np.zeros(x.shape, dtype=np.result_type(x.dtype, np.int8))
    if coords.size:
        np.add.at(y, coords[:, 0], x[coords[:, 1]] * x[coords[:, 2]])
    return unvec(y, tG.node_count, tH.node_count)


def explicit_contract_oracle(tG: TriangleSet, tH: TriangleSet, X: np.ndarray):
    X = _check_shape(tG, tH, X)
    x = vec(X)
    coords = explicit_coordinates(tG, tH)
    if not coords.size:
        return 0
    total = np.sum(x[coords[:, 0]] * x[coords[:, 1]] * x[coords[:, 2]])
    return total.item()
