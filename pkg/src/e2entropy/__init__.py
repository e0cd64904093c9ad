"""Entropy bounds from the second elementary symmetric polynomial.

For a positive semi-definite N x N matrix with eigenvalues x_i,

    S1 = sum eta(x_i) - eta(sum x_i)  <=  c_N sqrt(e2),
    c_N = log(N) sqrt(2N / (N - 1)),   e2 = sum_{i<j} x_i x_j,

with equality only at rank one and at multiples of the identity. The package
evaluates both sides, their gradients, random sweeps and conjecture probes,
and the derived bounds on minimum output entropy, entanglement of formation
and the Holevo quantity.
"""

from .channels import (
    BipartiteShape,
    Channel,
    apply,
    bit_flip_channel,
    depolarizing_channel,
    identity_channel,
    output_purity,
    output_rank_estimate,
    partial_trace_a,
    partial_trace_b,
    projector,
)
from .errors import DomainError, NotPSDError, PreconditionError, UndefinedRatioError
from .lab import (
    ProbeReport,
    SweepReport,
    fig1_data,
    fig2_data,
    probe_concavity,
    probe_ek_monotone,
    verify_theorem,
)
from .roofs import (
    BoundReport,
    Ensemble,
    RoofConfig,
    decompose_via_isometry,
    ef_bound_from_concurrence,
    holevo_lower_bound,
    min_output_entropy_bound,
    minimize_roof,
    roof_objective_concurrence,
    roof_objective_ef,
)
from .sampling import (
    SeedSpec,
    sample_channel,
    sample_density,
    sample_haar_pure,
    sample_simplex,
)
from .spectra import (
    GapReport,
    LogBase,
    Spectrum,
    c_constant,
    e2_from_matrix,
    e2_from_spectrum,
    eigenvalues,
    elementary_symmetric,
    entropy,
    eta,
    grad_e2,
    grad_f,
    grad_s1,
    inequality_gap,
    ratio_f,
    s1,
)

__all__ = [
    "apply",
    "BipartiteShape",
    "bit_flip_channel",
    "BoundReport",
    "c_constant",
    "Channel",
    "decompose_via_isometry",
    "depolarizing_channel",
    "DomainError",
    "e2_from_matrix",
    "e2_from_spectrum",
    "ef_bound_from_concurrence",
    "eigenvalues",
    "elementary_symmetric",
    "Ensemble",
    "entropy",
    "eta",
    "fig1_data",
    "fig2_data",
    "GapReport",
    "grad_e2",
    "grad_f",
    "grad_s1",
    "holevo_lower_bound",
    "identity_channel",
    "inequality_gap",
    "LogBase",
    "min_output_entropy_bound",
    "minimize_roof",
    "NotPSDError",
    "output_purity",
    "output_rank_estimate",
    "partial_trace_a",
    "partial_trace_b",
    "PreconditionError",
    "probe_concavity",
    "probe_ek_monotone",
    "ProbeReport",
    "projector",
    "ratio_f",
    "roof_objective_concurrence",
    "roof_objective_ef",
    "RoofConfig",
    "s1",
    "sample_channel",
    "sample_density",
    "sample_haar_pure",
    "sample_simplex",
    "SeedSpec",
    "Spectrum",
    "SweepReport",
    "UndefinedRatioError",
    "verify_theorem",
]

__version__ = "0.1.0"
