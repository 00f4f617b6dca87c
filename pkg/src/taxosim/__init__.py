"""Taxonomy-based semantic similarity of concept-code sets, with a benchmark harness."""

__version__ = "0.1.0"

from .bench import (
    AlgorithmCombo,
    BenchConfig,
    compute_matrix,
    enumerate_combos,
    pearson,
    rank_report,
    run_benchmark,
)
from .cohort import GroundTruthMatrix, PatientSet, SimilarityMatrix, load_cohort, load_truth
from .concept import CsMeasure, Direction, LiVariant, cs, cs_matrix
from .ic import IcMeasure, ic, ic_max
from .scale import ScaledScore, apply_scale
from .setsim import (
    SetScore,
    SetSimMeasure,
    setsim_bipartite,
    setsim_coefficient,
    setsim_hierarchical,
    setsim_mean_cs,
    to_distance,
)
from .assignment import Mode, assignment_optimum
from .taxonomy import Taxonomy, parse_edge_list

__all__ = [
    "AlgorithmCombo", "BenchConfig", "CsMeasure", "Direction", "GroundTruthMatrix",
    "IcMeasure", "LiVariant", "Mode", "PatientSet", "ScaledScore", "SetScore",
    "SetSimMeasure", "SimilarityMatrix", "Taxonomy", "apply_scale", "assignment_optimum",
    "compute_matrix", "cs", "cs_matrix", "enumerate_combos", "ic", "ic_max", "load_cohort",
    "load_truth", "parse_edge_list", "pearson", "rank_report", "run_benchmark",
    "setsim_bipartite", "setsim_coefficient", "setsim_hierarchical", "setsim_mean_cs",
    "to_distance",
]
