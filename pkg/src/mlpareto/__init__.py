"""Pareto-front community detection on two-layer networks."""
from .analysis import AriMatrix, SyntheticSpec, adjusted_rand_index, ari_matrix, generate_synthetic
from .graph import Layer, MultiLayerGraph, Partition, connected_components, degree_vector, laplacian
from .layers import (
    EventRecord,
    VolumeSeries,
    build_user_layer,
    build_volume_layer,
    fisher_z,
    ingest_events,
    pearson_window,
)
from .pareto import (
    FrontCandidate,
    ParetoFront,
    dominates,
    nondominated_filter,
    pareto_walk,
    recursive_communities,
    select_midpoint,
)
from .spectral import BisectionResult, cut_value, fiedler_vector, ratio_cut, spectral_bisect

__version__ = "0.1.0"
