"""End-to-end alignment: power iteration, rounding, refinement, scoring."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, TriangleSet, enumerate_triangles
from .matching import Matching, max_weight_matching
from .metrics import GroundTruth, MetricReport, evaluate
from .postprocess import RefineLog, refine
from .similarity import SimilarityMatrix
from .solver import SolverConfig, SolverTrace, ctame, tame


@dataclass
class AlignmentResult:
    matching: Matching
    X: np.ndarray
    trace: SolverTrace
    report: MetricReport
    refine_log: RefineLog


def align(gA: Graph, gB: Graph, w: SimilarityMatrix, cfg: SolverConfig | None = None,
          post_rounds: int = 3, b_topo: int = 200, b_seq: int = 50,
          truth: GroundTruth | None = None, threads: int = 1,
          triangles: tuple[TriangleSet, TriangleSet] | None = None) -> AlignmentResult:
    cfg = cfg or SolverConfig()
    tG, tH = triangles or (enumerate_triangles(gA), enumerate_triangles(gB))
    if cfg.constrained:
        X, trace = ctame(tG, tH, w, cfg, threads=threads)
    else:
        X, trace = tame(tG, tH, w, cfg, threads=threads)
    log = RefineLog()
    m0 = max_weight_matching(X)
    m = refine(m0, X, w, gA, gB, tG, tH, rounds=post_rounds, b_topo=b_topo, b_seq=b_seq, log=log)
    report = evaluate(m, gA, gB, tG, tH, truth)
    return AlignmentResult(m, X, trace, report, log)


def seqsim(w: SimilarityMatrix) -> Matching:
    """Max-weight matching on the prior alone."""
    return max_weight_matching(w)
