"""Finite-depth end structure of lazily defined infinite graphs.

Vertex-ends, edge-ends and metric ends are approximated from BFS windows,
with three-valued answers that only ever improve as the depth grows.
"""
from .cuts import (
    Cert,
    Notion,
    boundaries,
    classify_cut,
    infinite_diameter_witness,
    star_ball_score,
)
from .ends import (
    Outcome,
    Ray,
    classify_sequence,
    coarsen,
    count_ends_at_depth,
    end_approximant,
    separation_verdict,
    tail_in,
)
from .errors import (
    ClassificationError,
    ConfigError,
    DepthError,
    EndscopeError,
    InvalidRayError,
    NotExploredError,
    NotMetricRayError,
    OracleConflict,
    QISpecViolation,
)
from .gallery import ground_truth, make
from .graph import FiniteGraph, LazyGraph, Window, components_of_complement, distance, explore, set_diameter
from .qi import QuasiIsometrySpec, fatten, qi_map_ray, qi_verify, quasi_open_check
from .walk import FreeGroupCayley, StepMeasure, convergence_report, free_group_cayley, simulate

__version__ = "0.1.0"

__all__ = [
    "Cert", "Notion", "boundaries", "classify_cut", "infinite_diameter_witness", "star_ball_score",
    "Outcome", "Ray", "classify_sequence", "coarsen", "count_ends_at_depth", "end_approximant",
    "separation_verdict", "tail_in",
    "ClassificationError", "ConfigError", "DepthError", "EndscopeError", "InvalidRayError",
    "NotExploredError", "NotMetricRayError", "OracleConflict", "QISpecViolation",
    "ground_truth", "make",
    "FiniteGraph", "LazyGraph", "Window", "components_of_complement", "distance", "explore", "set_diameter",
    "QuasiIsometrySpec", "fatten", "qi_map_ray", "qi_verify", "quasi_open_check",
    "FreeGroupCayley", "StepMeasure", "convergence_report", "free_group_cayley", "simulate",
]
