"""Spectral bi-clustering under edge-flipping randomized response."""
__version__ = "0.1.0"

from ._accel import backend_name
from .errors import (
    DataFormatError,
    DegenerateCutError,
    DisconnectedGraphError,
    GraphError,
    NumericalError,
    RRSpectralError,
)
from .graph import (
    Cut,
    EdgeSet,
    Graph,
    barbell_graph,
    brute_force_min_cut,
    build_graph,
    complete_graph,
    connected_components,
    cut_edges,
    cut_ratio_alpha,
    cut_ratio_alpha_prime,
    d_size,
    is_connected,
    largest_component,
    path_graph,
    symmetric_difference,
)
from .spectral import (
    AssumptionReport,
    Spectrum,
    SweepCut,
    check_assumptions,
    cheeger_diagnostics,
    laplacian,
    laplacian_spectrum,
    p_threshold,
    smallest_eigenpairs,
    spectral_robustness,
    sweep,
    sweep_cut,
)
from .privacy import (
    FlipSample,
    NoPrivacyError,
    apply_randomized_response,
    expected_flipped_cut_ratio,
    flip_sample,
    gamma0,
    privacy_budget,
    ratio_gap_tail_bound,
)
from .generators import (
    BlockModelSpec,
    NegativeFamilySpec,
    eigenvalue_ratio_curve,
    erdos_renyi,
    expected_flipped_laplacian,
    expected_laplacian_negative,
    negative_family,
    planted_partition,
    sbm,
)
from .ingest import PruneConfig, parse_edge_list, prune, read_graph, write_graph
from .experiments import (
    GraphSource,
    SweepConfig,
    SweepResult,
    emit_csv,
    emit_svg,
    negative_demo,
    replay,
    robustness_sweep,
    run_manifest,
)
