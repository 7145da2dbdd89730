"""Coresets for the polytope distance problem and their behavior under merging."""
from .errors import (
    BadTheta,
    CoresetError,
    DegenerateOptimum,
    IterationLimit,
    MalformedInstance,
    Mismatch,
    NotSeparable,
    OriginInsideHull,
    ParseError,
    TooManyPoints,
    WideAngle,
    ZeroDirection,
    ZeroPoint,
)
from .geometry import (
    Certificate,
    ConvexCombination,
    PointSet,
    angular_diameter,
    epsilon_of,
    excentricity,
    projection_length,
    witness_point,
)
from .solver import SolveResult, SolverConfig, brute_force_distance, frank_wolfe, size_bound
from .merge import (
    MergeableCoreset,
    StreamReport,
    merge_min_norm,
    merge_rerun,
    shortest_point_coreset,
    stream_process,
)
from .adversarial import AdversarialInstance, ClauseReport, theorem2_instance, theorem3_instance, verify_instance
from .maxmargin import LabeledPointSet, MarginResult, margin_certificate, reduce_labeled, solve_margin

__version__ = "0.1.0"
