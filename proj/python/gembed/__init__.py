"""Compressive embedding: accelerate embedding algorithms by embedding a
graph-sampled sketch and diffusing the result to all points with graph
filters."""

from ._gembed import (
    BridgeError,
    ChebyshevFilter,
    DegenerateInputError,
    Graph,
    InvalidInputError,
    InvalidParameterError,
    Kernel,
    Laplacian,
    SampleRule,
    SolverError,
    aci,
    acc,
    adapted_distribution,
    bound_samples_embedding,
    bound_samples_node,
    build_knn_graph,
    chd_weights,
    chebyshev_coeffs,
    choose_sample_count,
    compressive_embed,
    draw_samples,
    estimate_atom_norms,
    exact_filter_dense,
    filter_signal,
    generate_synthetic,
    kdd,
    kdd_matrix,
    laplacian,
    lkd,
    localize,
    low_rank_truncate,
    rkhs_diffuse,
    set_max_threads,
    tikhonov_diffuse,
    uniform_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "BridgeError",
    "ChebyshevFilter",
    "DegenerateInputError",
    "Graph",
    "InvalidInputError",
    "InvalidParameterError",
    "Kernel",
    "Laplacian",
    "SampleRule",
    "SolverError",
    "aci",
    "acc",
    "adapted_distribution",
    "bound_samples_embedding",
    "bound_samples_node",
    "build_knn_graph",
    "chd_weights",
    "chebyshev_coeffs",
    "choose_sample_count",
    "compressive_embed",
    "draw_samples",
    "estimate_atom_norms",
    "exact_filter_dense",
    "filter_signal",
    "generate_synthetic",
    "kdd",
    "kdd_matrix",
    "laplacian",
    "lkd",
    "localize",
    "low_rank_truncate",
    "rkhs_diffuse",
    "set_max_threads",
    "tikhonov_diffuse",
    "uniform_distribution",
]
