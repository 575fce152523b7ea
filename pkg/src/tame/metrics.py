"""Alignment quality: node correctness, coverage, and edge/triangle conservation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .errors import InputError
from .graph import Graph, TriangleSet
from .matching import Matching


@dataclass(frozen=True)
class GroundTruth:
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        left = [i for i, _ in self.pairs]
        right = [j for _, j in self.pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise InputError("ground truth is not one-to-one")

    @classmethod
    def from_pairs(cls, pairs) -> "GroundTruth":
        return cls(frozenset((int(i), int(j)) for i, j in pairs))

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class NodeCorrectness:
    precision: float
    recall: float
    f_nc: float
    degenerate: bool = False


@dataclass(frozen=True)
class Conservation:
    score: float
    ncv_score: float
    conserved: int
    gapped: int
    degenerate: bool = False


def _ratio(num: int, den: int) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def node_correctness(m: Matching, truth: GroundTruth) -> NodeCorrectness:
    if not truth.pairs:
        raise InputError("ground truth is empty")
    if not len(m):
        return NodeCorrectness(0.0, 0.0, 0.0, degenerate=True)
    hits = len(set(m.pairs) & truth.pairs)
    p = hits / len(m)
    r = hits / len(truth)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return NodeCorrectness(p, r, f)


def node_coverage(m: Matching, gA: Graph, gB: Graph) -> float:
    touched = len({i for i, _ in m.pairs}) + len({j for _, j in m.pairs})
    return touched / (gA.node_count + gB.node_count)


def _conservation(conserved: int, gapped: int, ncv: float) -> Conservation:
    score, degenerate = _ratio(conserved, conserved + gapped)
    return Conservation(score, math.sqrt(ncv * score), conserved, gapped, degenerate)


def gs3(m: Matching, gA: Graph, gB: Graph) -> Conservation:
    """Edge conservation over edges whose two endpoints are both matched."""
    fwd, inv = m.as_dict(), m.inverse()
    conserved = gapped = 0
    for i, j in gA.edges:
        if i in fwd and j in fwd:
            if gB.has_edge(fwd[i], fwd[j]):
                conserved += 1
            else:
                gapped += 1
    for a, b in gB.edges:
        if a in inv and b in inv and not gA.has_edge(inv[a], inv[b]):
            gapped += 1
    return _conservation(conserved, gapped, node_coverage(m, gA, gB))


def tgs3(m: Matching, tG: TriangleSet, tH: TriangleSet, ncv: float | None = None) -> Conservation:
    """Triangle analogue of :func:`gs3`.

    ``ncv`` is needed for the composite; without graphs at hand it is taken
    from the node counts carried by the triangle sets.
    """
    fwd, inv = m.as_dict(), m.inverse()
    conserved = gapped = 0
    for i, j, k in tG.triangles:
        if i in fwd and j in fwd and k in fwd:
            if tH.contains(fwd[i], fwd[j], fwd[k]):
                conserved += 1
            else:
                gapped += 1
    for a, b, c in tH.triangles:
        if a in inv and b in inv and c in inv and not tG.contains(inv[a], inv[b], inv[c]):
            gapped += 1
    if ncv is None:
        ncv = 2 * len(m) / (tG.node_count + tH.node_count)
    return _conservation(conserved, gapped, ncv)


@dataclass(frozen=True)
class MetricReport:
    ncv: float
    gs3: float
    ncv_gs3: float
    tgs3: float
    ncv_tgs3: float
    conserved_edges: int
    gapped_edges: int
    conserved_triangles: int
    gapped_triangles: int
    matched_pairs: int
    f_nc: float | None = None
    precision: float | None = None
    recall: float | None = None
    flags: tuple[str, ...] = field(default=())

    def to_text(self) -> str:
        lines = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if f.name == "flags":
                value = ",".join(value) if value else "none"
            elif isinstance(value, float):
                value = f"{value:.12g}"
            lines.append(f"{f.name}: {value}\n")
        return "".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "MetricReport":
        kinds = {f.name: f for f in fields(cls)}
        values = {}
        for line in text.splitlines():
            if not line.strip():
                continue
            key, _, raw = line.partition(":")
            key, raw = key.strip(), raw.strip()
            if key not in kinds:
                continue
            if key == "flags":
                values[key] = () if raw == "none" else tuple(raw.split(","))
            elif key in ("conserved_edges", "gapped_edges", "conserved_triangles",
                         "gapped_triangles", "matched_pairs"):
                values[key] = int(raw)
            else:
                values[key] = float(raw)
        return cls(**values)


def evaluate(m: Matching, gA: Graph, gB: Graph, tG: TriangleSet, tH: TriangleSet,
             truth: GroundTruth | None = None) -> MetricReport:
    ncv = node_coverage(m, gA, gB)
    e = gs3(m, gA, gB)
    t = tgs3(m, tG, tH, ncv=ncv)
    flags = []
    if e.degenerate:
        flags.append("gs3_degenerate")
    if t.degenerate:
        flags.append("tgs3_degenerate")
    extra = {}
    if truth is not None:
        nc = node_correctness(m, truth)
        if nc.degenerate:
            flags.append("nc_degenerate")
        extra = dict(f_nc=nc.f_nc, precision=nc.precision, recall=nc.recall)
    return MetricReport(
        ncv=ncv, gs3=e.score, ncv_gs3=e.ncv_score, tgs3=t.score, ncv_tgs3=t.ncv_score,
        conserved_edges=e.conserved, gapped_edges=e.gapped,
        conserved_triangles=t.conserved, gapped_triangles=t.gapped,
        matched_pairs=len(m), flags=tuple(flags), **extra)


def parse_truth(text: str, gA: Graph, gB: Graph) -> GroundTruth:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"line {lineno}: expected 'labelA labelB'")
        pairs.append((gA.index(parts[0]), gB.index(parts[1])))
    return GroundTruth.from_pairs(pairs)


def format_truth(truth: GroundTruth, gA: Graph, gB: Graph) -> str:
    return "".join(f"{gA.labels[i]}\t{gB.labels[j]}\n" for i, j in sorted(truth.pairs))
