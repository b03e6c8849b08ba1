"""Single-sample Ising interaction estimation over a known matrix span."""

from .core import (
    IsingSpec,
    conditional_prob_plus,
    frobenius_norm,
    infinity_norm,
    local_field,
    restrict,
    spectral_norm,
    trace_inner,
    validate_interaction,
)
from .basis import (
    MatrixBasis,
    beta_error_bound,
    combine,
    gram_schmidt,
    min_singular_value,
    project,
    unique_edge_counts,
)
from .sampler import (
    ExactDistribution,
    GlauberConfig,
    enumerate_distribution,
    exact_sample,
    glauber_sample,
    glauber_sample_many,
    log_partition,
    make_rng,
)
from .mple import (
    EstimationResult,
    MpleConfig,
    directional_derivative,
    directional_second_derivative,
    fit,
    grad_beta,
    neg_log_pl,
    regularized_subgradient,
)
from .conditioning import SubsetCover, best_subset_for_weights, build_cover, verify_cover
from .oneparam import fit_scalar, partition_certificate, phi_double_prime, phi_prime, phi_scalar
from .metrics import (
    conditional_mean_zero_check,
    conditional_variance_floor,
    linear_variance_exact,
    tv_chi_exact,
)

__version__ = "0.1.0"
