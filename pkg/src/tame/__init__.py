"""Triangle-conserving network alignment with TAME and cTAME."""

__version__ = "0.1.0"

from .errors import (DegenerateIterateError, EmptyConstraintError, InputError, NumericalError,
                     OracleLimitError, TameError)
from .graph import Graph, TriangleSet, enumerate_triangles, parse_graph, product_tensor_footprint
from .kernel import contract_cubic, explicit_ttv_oracle, imp_ttv
from .matching import Matching, greedy_b_matching, max_weight_matching, score_triangles
from .metrics import GroundTruth, MetricReport, evaluate
from .pipeline import align
from .similarity import SimilarityMatrix, normalize_unit, parse_similarity
from .solver import SolverConfig, ctame, tame
from .synthgen import GenConfig, generate

__all__ = [
    "DegenerateIterateError", "EmptyConstraintError", "GenConfig", "Graph", "GroundTruth", "InputError",
    "Matching", "MetricReport", "NumericalError", "OracleLimitError", "SimilarityMatrix",
    "SolverConfig", "TameError", "TriangleSet", "align", "contract_cubic", "ctame",
    "enumerate_triangles", "evaluate", "explicit_ttv_oracle", "generate", "greedy_b_matching", "imp_ttv",
    "max_weight_matching", "normalize_unit", "parse_graph", "parse_similarity",
    "product_tensor_footprint", "score_triangles", "tame",
]
