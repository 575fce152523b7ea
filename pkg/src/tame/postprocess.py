"""Local swap refinement turning a real-valued alignment matrix into a matching.

Each round walks the current matches in order of weighted degree in ``X``
and tries swaps against candidates from the preferred sets, accepting a
move when it raises topological similarity, or keeps it equal and raises
sequence similarity.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import Graph, TriangleSet
from .matching import Matching, greedy_b_matching, max_weight_matching
from .similarity import SimilarityMatrix

WEIGHT_TOL = 1e-12


@dataclass(frozen=True, order=True)
class SwapObjective:
    topo: float
    seq: float


@dataclass
class PreferredSets:
    pref_h: list[set[int]]
    pref_g: list[set[int]]


def build_candidates(X: np.ndarray, w: SimilarityMatrix, b_topo: int = 200,
                     b_seq: int = 50) -> set[tuple[int, int]]:
    """Union of a b_topo-matching over ``X`` and a b_seq-matching over ``w``."""
    topo = greedy_b_matching(np.asarray(X), b_topo).edges
    seq = greedy_b_matching(w, b_seq).edges
    return set(topo) | set(seq)


def preferred_sets(candidates, gA: Graph, gB: Graph) -> PreferredSets:
    """Candidate partners per node; the graph-neighbour terms are added per match in ``refine``."""
    pref_h = [set() for _ in range(gA.node_count)]
    pref_g = [set() for _ in range(gB.node_count)]
    for i, ip in candidates:
        pref_h[i].add(ip)
        pref_g[ip].add(i)
    return PreferredSets(pref_h, pref_g)


def _pair_weight(wmap: dict, i, ip) -> float:
    if i is None or ip is None:
        return 0.0
    return wmap.get((i, ip), 0.0)


def _weighted_part(a, b, c, ia, ib, ic, wmap: dict) -> float:
    """Average over the three anchors of the better pairing of the other two endpoints."""
    total = 0.0
    for j, jp, k, kp in ((b, ib, c, ic), (a, ia, c, ic), (a, ia, b, ib)):
        direct = wmap.get((j, jp), 0.0) + wmap.get((k, kp), 0.0)
        cross = wmap.get((j, kp), 0.0) + wmap.get((k, jp), 0.0)
        total += direct if direct >= cross else cross
    return total / 3.0


def _triangle_term(tri, image, tH: TriangleSet, wmap: dict) -> tuple[int, float]:
    """Contribution of one G-triangle: (1, weighted part) when conserved, else (0, 0)."""
    a, b, c = tri
    ia, ib, ic = image(a), image(b), image(c)
    if ia is None or ib is None or ic is None or not tH.contains(ia, ib, ic):
        return 0, 0.0
    return 1, _weighted_part(a, b, c, ia, ib, ic, wmap)


def topo_terms(m: Matching, tG: TriangleSet, tH: TriangleSet, wmap: dict) -> tuple[int, float]:
    fwd = m.as_dict()
    count, weighted = 0, 0.0
    for tri in tG.triangles:
        c, v = _triangle_term(tri, fwd.get, tH, wmap)
        count += c
        weighted += v
    return count, weighted


def topo_similarity(m: Matching, tG: TriangleSet, tH: TriangleSet,
                    w: SimilarityMatrix | dict | None = None) -> float:
    """Conserved triangles, each weighted by one plus its best endpoint similarity."""
    wmap = _wmap(w)
    count, weighted = topo_terms(m, tG, tH, wmap)
    return count + weighted


def seq_similarity(m: Matching, w: SimilarityMatrix | dict | None) -> float:
    wmap = _wmap(w)
    return float(sum(wmap.get(p, 0.0) for p in m.pairs))


def _wmap(w) -> dict:
    if w is None:
        return {}
    if isinstance(w, dict):
        return w
    return w.lookup()


class _State:
    """Current matching plus cached per-triangle contributions."""

    def __init__(self, m0: Matching, tG: TriangleSet, tH: TriangleSet, wmap: dict):
        self.fwd = m0.as_dict()
        self.inv = m0.inverse()
        self.tG, self.tH, self.wmap = tG, tH, wmap
        self.pairs_h = [set(p) for p in tH.incidence]
        self.tris_of = [[tuple(sorted((v, j, k))) for j, k in pairs]
                        for v, pairs in enumerate(tG.incidence)]
        self.terms = {}
        for tri in tG.triangles:
            term = _triangle_term(tri, self.fwd.get, tH, wmap)
            if term[0]:
                self.terms[tri] = term
        self.count = sum(c for c, _ in self.terms.values())
        self.weighted = sum(v for _, v in self.terms.values())
        self.seq = seq_similarity(m0, wmap)
        self._staged = {}

    def objective(self) -> SwapObjective:
        return SwapObjective(self.count + self.weighted, self.seq)

    def _term(self, tri, moves):
        fwd = self.fwd
        a, b, c = tri
        ia = moves[a] if a in moves else fwd.get(a)
        ib = moves[b] if b in moves else fwd.get(b)
        ic = moves[c] if c in moves else fwd.get(c)
        if ia is None or ib is None or ic is None:
            return 0, 0.0
        if ((ib, ic) if ib < ic else (ic, ib)) not in self.pairs_h[ia]:
            return 0, 0.0
        return 1, _weighted_part(a, b, c, ia, ib, ic, self.wmap)

    def delta(self, moves: dict) -> tuple[int, float, float]:
        """Change in (count, weighted, seq) if G-nodes in ``moves`` took new images."""
        touched = set()
        for v in moves:
            touched.update(self.tris_of[v])
        staged = {}
        dc, dw = 0, 0.0
        for tri in touched:
            c0, w0 = self.terms.get(tri, (0, 0.0))
            c1, w1 = staged[tri] = self._term(tri, moves)
            dc += c1 - c0
            dw += w1 - w0
        self._staged = staged
        ds = 0.0
        for v, img in moves.items():
            ds += _pair_weight(self.wmap, v, img) - _pair_weight(self.wmap, v, self.fwd.get(v))
        return dc, dw, ds

    def apply(self, moves: dict, d: tuple[int, float, float]):
        """Commit ``moves``; ``d`` must come from the immediately preceding ``delta``."""
        for v in moves:
            old = self.fwd.pop(v, None)
            if old is not None and self.inv.get(old) == v:
                del self.inv[old]
        for v, img in moves.items():
            if img is not None:
                self.fwd[v] = img
                self.inv[img] = v
        for tri, term in self._staged.items():
            if term[0]:
                self.terms[tri] = term
            else:
                self.terms.pop(tri, None)
        self.count += d[0]
        self.weighted += d[1]
        self.seq += d[2]


def _accept(d: tuple[int, float, float]) -> bool:
    dc, dw, ds = d
    if dc == 0 and abs(dw) <= WEIGHT_TOL:
        return ds > WEIGHT_TOL
    return dc + dw > 0


@dataclass
class RefineLog:
    """Objective after each accepted swap, starting with the initial matching."""

    objectives: list[SwapObjective] = field(default_factory=list)
    swaps: int = 0


def refine(m0: Matching, X: np.ndarray, w: SimilarityMatrix, gA: Graph, gB: Graph,
           tG: TriangleSet, tH: TriangleSet, rounds: int = 3, b_topo: int = 200,
           b_seq: int = 50, log: RefineLog | None = None, verify: bool = False) -> Matching:
    """Improve ``m0`` by local swaps within preferred sets for ``rounds`` passes.

    With ``verify`` the incrementally maintained objective is checked against
    a full recomputation after every accepted swap.
    """
    if rounds <= 0:
        if log is not None:
            log.objectives.append(_objective_of(m0, tG, tH, _wmap(w)))
        return m0
    X = np.asarray(X, dtype=float)
    wmap = w.lookup()
    pref = preferred_sets(build_candidates(X, w, b_topo, b_seq), gA, gB)
    row_deg = X.sum(axis=1)
    col_deg = X.sum(axis=0)

    state = _State(m0, tG, tH, wmap)
    if log is not None:
        log.objectives.append(state.objective())

    for _ in range(rounds):
        order = sorted(state.fwd.items(), key=lambda p: (-(row_deg[p[0]] + col_deg[p[1]]), p))
        # Entries are G-nodes, so a displaced match jj' is read back as ji'
        # without re-sorting.
        for i, _ in order:
            ip = state.fwd[i]
            pref_h = pref.pref_h[i] | set(gB.neighbors(ip))
            pref_g = pref.pref_g[ip] | set(gA.neighbors(i))
            moves = []
            for jp in pref_h:
                if jp == ip:
                    continue
                j = state.inv.get(jp)
                if j is None:
                    moves.append(({i: jp}, ((i, jp),)))
                elif j in pref_g:
                    moves.append(({i: jp, j: ip}, ((i, jp), (j, ip))))
            for j in pref_g:
                if j != i and j not in state.fwd:
                    moves.append(({i: None, j: ip}, ((j, ip),)))
            moves.sort(key=lambda mv: (-sum(wmap.get(q, 0.0) for q in mv[1]),
                                       -sum(X[q] for q in mv[1]), len(mv[0]), mv[1]))
            for mv, _ in moves:
                d = state.delta(mv)
                if not _accept(d):
                    continue
                state.apply(mv, d)
                if log is not None:
                    log.swaps += 1
                    log.objectives.append(state.objective())
                if verify:
                    _verify(state)
                break
    return Matching(tuple(state.fwd.items()), float(sum(X[q] for q in state.fwd.items())))


def _objective_of(m: Matching, tG, tH, wmap) -> SwapObjective:
    c, v = topo_terms(m, tG, tH, wmap)
    return SwapObjective(c + v, seq_similarity(m, wmap))


def _verify(state: _State):
    m = Matching(tuple(state.fwd.items()))
    count, weighted = topo_terms(m, state.tG, state.tH, state.wmap)
    seq = seq_similarity(m, state.wmap)
    if count != state.count or abs(weighted - state.weighted) > 1e-9 or abs(seq - state.seq) > 1e-9:
        raise AssertionError(
            f"incremental objective drifted: count {state.count} vs {count}, "
            f"weighted {state.weighted} vs {weighted}, seq {state.seq} vs {seq}")


def align_postprocess(X: np.ndarray, w: SimilarityMatrix, gA: Graph, gB: Graph,
                      tG: TriangleSet, tH: TriangleSet, rounds: int = 3, b_topo: int = 200,
                      b_seq: int = 50, log: RefineLog | None = None) -> Matching:
    """Max-weight matching on ``X`` followed by :func:`refine`."""
    m0 = max_weight_matching(X)
    return refine(m0, X, w, gA, gB, tG, tH, rounds=rounds, b_topo=b_topo, b_seq=b_seq, log=log)
