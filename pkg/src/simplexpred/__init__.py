"""Kernel estimation of higher-order arrival probabilities in temporal simplicial complexes.

A filtration of simplicial complexes is sliced in time; every d-simplex and
each vertex in its k-hop neighbourhood get a discrete feature (face vector of
the neighbourhood plus a co-occurrence score), and the probability that the
pair closes into a (d+1)-simplex in the next slice is estimated by a
smoothed ratio of realized to possible arrivals per feature.
"""

__version__ = "0.1.0"

from .baselines import adamic_adar, baseline_score, jaccard, preferential_attachment
from .complex import ComplexBuilder, ComplexSnapshot, Simplex, contains, f_vector, insert, simplices_of_dim
from .cooccurrence import CoOccurrenceStore, record_arrivals, score
from .errors import DataError, InsufficientData, InsufficientDataError, SimplexPredError
from .estimator import (
    FeatureIndex,
    KernelParams,
    build_index,
    build_slice_counts,
    confidence_interval,
    estimate,
    estimate_or_fallback,
    kernel,
    lattice_ball_size,
)
from .evaluation import (
    EvalReport,
    ExperimentConfig,
    LabeledSample,
    auc,
    cross_validate_beta,
    run_experiment,
    sample_candidates,
)
from .features import extract, l1_distance
from .ingestion import ArrivalLog, Filtration, load_dataset, load_named, slice_log
from .neighborhood import k_ball_simplex, k_ball_vertex, neighborhood_feature, sub_complex
from .synthetic import SyntheticConfig, consistency_experiment, generate, normality_experiment

__all__ = [
    "ArrivalLog",
    "ComplexBuilder",
    "ComplexSnapshot",
    "CoOccurrenceStore",
    "DataError",
    "EvalReport",
    "ExperimentConfig",
    "FeatureIndex",
    "Filtration",
    "InsufficientData",
    "InsufficientDataError",
    "KernelParams",
    "LabeledSample",
    "Simplex",
    "SimplexPredError",
    "SyntheticConfig",
    "adamic_adar",
    "auc",
    "baseline_score",
    "build_index",
    "build_slice_counts",
    "confidence_interval",
    "consistency_experiment",
    "contains",
    "cross_validate_beta",
    "estimate",
    "estimate_or_fallback",
    "extract",
    "f_vector",
    "generate",
    "insert",
    "jaccard",
    "k_ball_simplex",
    "k_ball_vertex",
    "kernel",
    "l1_distance",
    "lattice_ball_size",
    "load_dataset",
    "load_named",
    "neighborhood_feature",
    "normality_experiment",
    "preferential_attachment",
    "record_arrivals",
    "run_experiment",
    "sample_candidates",
    "score",
    "simplices_of_dim",
    "slice_log",
    "sub_complex",
]
