"""Systemic performance/robustness measures of first-order consensus networks
over weighted undirected graphs: evaluation, verification and design."""

from .design import (AugmentationReport, RankingEntry, RewireResult,
                     SolverOptions, Topology, WeightAllocationResult,
                     fundamental_limit, greedy_augment, optimize_weights,
                     project_simplex, rewire_bruteforce)
from .errors import (ConfigError, ConnectivityError, DimensionError,
                     DomainError, GenerationError, GraphFormatError,
                     InputError, NumericalError, ScaleError, SolverError,
                     SystemicError)
from .graphs import (Laplacian, WeightedGraph, centering_matrix, generate,
                     graph_add, is_connected, laplacian, parse_graph,
                     scalar_mul, serialize_graph, spanning_tree_count)
from .measures import (ENTROPY_FORM_WARNING, MeasureDescriptor,
                       QuadratureSettings, SpectralFunction, TransferModel,
                       applicable_properties, entropy_via_trees, evaluate,
                       evaluate_eigenvalues, get_spectral_function, hp_norm,
                       hp_norm_numeric, is_homogeneous, is_spectral,
                       register_spectral_function, spectral_form, zeta,
                       zeta_measure)
from .properties import (PropertyReport, Violation, check_convexity,
                         check_homogeneity, check_monotonicity,
                         check_orthogonal_invariance, check_schur_convexity,
                         check_subadditivity, replay_trial, run_check)
from .sim import SimConfig, decay_rate, estimate_h2, simulate_output
from .spectral import (Spectrum, eig_sym, graph_spectrum, laplacian_spectrum,
                       pseudo_inverse, psd_order, zero_tolerance)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
