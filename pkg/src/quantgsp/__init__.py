"""Distributed graph filtering with quantized messages and optimized bit allocation."""

from .allocation import (AllocationPlan, ErrorModel, InfeasibleBudget, compute_F, compute_Hk,
                         expected_mse, integerize, kkt_allocate, kkt_allocate_numeric,
                         uniform_allocate)
from .distsim import (SimulationTrace, run_bounded_quantized, run_exact,
                      run_unbounded_quantized, run_with_injected_errors)
from .filter_design import FilterApprox, FilterSpec, apply_filter_exact, chebyshev_fit
from .graph_core import (Graph, GraphError, LaplacianPair, build_binomial_degree_graph,
                         build_geometric_graph, eccentricities, laplacians, message_bound)
from .quantizer import QuantizerConfig, expected_sq_error, quantize

__version__ = "0.1.0"
