"""Attitude-IC diffusion: simulation, exact oracles, RR-sample estimators and
seed selection for total and actionable attitude."""

__version__ = "0.1.0"

from .actionable import (
    RRGraphSample,
    count_for_set,
    delta_bound,
    estimate_actionable,
    generate_rr_graph,
    maximize_actionable,
)
from .attitude_max import (
    CoverageIndex,
    SelectionResult,
    greedy_max_coverage,
    maximize_attitude,
    required_samples_max,
)
from .errors import AttitudeICError, GraphFormatError, SizeGuardError, ValidationError
from .graph import (
    Constant,
    Edge,
    FromFile,
    Graph,
    InDegree,
    LoadOptions,
    load_edge_list,
    parse_edge_list,
    parse_scheme,
    transpose_view,
    uniform_random_edge,
)
from .oracle import exact_best_seed, exact_enumerate, mc_estimate, simulate_aic
from .ras import (
    EstimatorParams,
    RRSample,
    estimate_attitude,
    estimate_influence,
    estimate_node_attitude,
    generate_rr_sample,
    required_samples,
)
from .rng import RandomStream

__all__ = [
    "__version__",
    "RRGraphSample",
    "count_for_set",
    "delta_bound",
    "estimate_actionable",
    "generate_rr_graph",
    "maximize_actionable",
    "CoverageIndex",
    "SelectionResult",
    "greedy_max_coverage",
    "maximize_attitude",
    "required_samples_max",
    "Constant",
    "Edge",
    "FromFile",
    "Graph",
    "InDegree",
    "LoadOptions",
    "load_edge_list",
    "parse_edge_list",
    "parse_scheme",
    "transpose_view",
    "uniform_random_edge",
    "EstimatorParams",
    "RRSample",
    "estimate_attitude",
    "estimate_influence",
    "estimate_node_attitude",
    "generate_rr_sample",
    "required_samples",
    "AttitudeICError",
    "GraphFormatError",
    "SizeGuardError",
    "ValidationError",
    "exact_best_seed",
    "exact_enumerate",
    "mc_estimate",
    "simulate_aic",
    "RandomStream",
]
