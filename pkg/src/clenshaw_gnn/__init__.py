"""Graph spectral filtering engine built on Chebyshev/Clenshaw recurrences.

Residual graph convolutions whose linearized propagation provably equals a
polynomial filter (monomial basis for the single back-state form,
second-kind Chebyshev basis for the two back-state form), verified against
a dense eigendecomposition oracle.
"""

from .autodiff import ALPHA_GROUP, WEIGHT_GROUP, Parameter, Tape, backward, identity_mapping
from .data import Dataset, Split, generate_sbm, homophily, load_dataset, random_split
from .estimator import ChebyshevGraphFilter, ClenshawNodeClassifier
from .filters import (
    LinearPropagationTrace,
    clenshaw_propagate_linear,
    fixed_param_coefficients,
    gcnii_propagate_linear,
    horner_propagate_linear,
    layer_alphas_to_filter_coeffs,
)
from .graphs import (
    PROP_ADJACENCY,
    PROP_LAPLACIAN,
    Graph,
    PropagationOperator,
    build_graph,
    laplacian,
    normalized_adjacency,
    read_edge_list,
    spmm,
)
from .models import ModelConfig, PropagationModel, beta_schedule, predict
from .optim import Adam, SGDMomentum
from .polybasis import (
    CHEBYSHEV_T,
    CHEBYSHEV_U,
    MONOMIAL,
    CoeffVector,
    cheb_t,
    cheb_u,
    clenshaw_b_sequence,
    clenshaw_band_matrix,
    clenshaw_sum_u,
    direct_sum_u,
    horner_eval,
    u_basis_to_monomial,
)
from .spectral import EigenDecomposition, apply_filter_exact, eig_sym, filter_response
from .training import TrainingDiverged, TrainResult, evaluate, train
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "ALPHA_GROUP",
    "WEIGHT_GROUP",
    "Adam",
    "CHEBYSHEV_T",
    "CHEBYSHEV_U",
    "ChebyshevGraphFilter",
    "ClenshawNodeClassifier",
    "CoeffVector",
    "Dataset",
    "EigenDecomposition",
    "Graph",
    "LinearPropagationTrace",
    "MONOMIAL",
    "ModelConfig",
    "PROP_ADJACENCY",
    "PROP_LAPLACIAN",
    "Parameter",
    "PropagationModel",
    "PropagationOperator",
    "SGDMomentum",
    "Split",
    "Tape",
    "TrainResult",
    "TrainingDiverged",
    "apply_filter_exact",
    "backward",
    "beta_schedule",
    "build_graph",
    "cheb_t",
    "cheb_u",
    "clenshaw_b_sequence",
    "clenshaw_band_matrix",
    "clenshaw_propagate_linear",
    "clenshaw_sum_u",
    "direct_sum_u",
    "eig_sym",
    "evaluate",
    "filter_response",
    "fixed_param_coefficients",
    "gcnii_propagate_linear",
    "generate_sbm",
    "homophily",
    "horner_eval",
    "horner_propagate_linear",
    "identity_mapping",
    "laplacian",
    "layer_alphas_to_filter_coeffs",
    "load_dataset",
    "normalized_adjacency",
    "predict",
    "random_split",
    "read_edge_list",
    "run_suite",
    "spmm",
    "train",
    "u_basis_to_monomial",
]
