"""Exact density-matrix training of small noisy variational circuits.

Simulation of hardware-style circuits (feature encoder + layered ansatz)
under merged depolarization, shot-sampled parameter-shift training, and
closed-form calculators for utility bounds, privacy loss, and
statistical-query shot counts.
"""

from .bounds import (
    BoundInputs,
    Infeasible,
    PrivacyInputs,
    QsqInputs,
    compose,
    constants,
    epsilon_chain,
    gradient_epsilon,
    lipschitz,
    per_query_epsilon,
    pl_constant,
    qsq_coverage_floor,
    qsq_shot_count,
    r1_bound,
    r2_bound,
    simulate_qsq_query,
    smoothness,
    total_epsilon,
)
from .circuits import (
    AnsatzSpec,
    CircuitSpec,
    EncoderSpec,
    build_ansatz,
    build_encoder,
    circuit_unitary,
    empty_circuit,
    evaluate,
    shift_parameter,
)
from .dataprep import (
    RawDataset,
    ReducedDataset,
    filter_binary,
    jacobi_eigh,
    load_csv,
    load_reduced_csv,
    pca_reduce,
    reduced_to_csv,
    split,
    synthesize,
)
from .gradients import (
    DecompositionReport,
    GradContext,
    GradDecomposition,
    analytic_gradient,
    decomposition_constants,
    estimated_gradient,
    predicted_mean,
    verify_decomposition,
)
from .measure import (
    PovmSpec,
    noisy_expectation,
    povm_from_projector,
    readout_povm,
    sample_mean_pmf,
    sample_mean_variance,
    sample_shots,
)
from .noise import NO_NOISE, NoiseSpec, general_weights, merged_general_state, merged_rate
from .seeding import derive_rng
from .training import (
    CURVE_HEADER,
    PL_BOX,
    EncodedDataset,
    ShiftObservables,
    TrainConfig,
    TrainRecord,
    TrainingDiverged,
    analytic_loss_gradient,
    encode_features,
    objective,
    predictions,
    records_to_csv,
    train,
    utility_r1,
    utility_r2,
)

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "BoundInputs",
    "CURVE_HEADER",
    "CircuitSpec",
    "DecompositionReport",
    "EncodedDataset",
    "EncoderSpec",
    "GradContext",
    "GradDecomposition",
    "Infeasible",
    "NO_NOISE",
    "NoiseSpec",
    "PL_BOX",
    "PovmSpec",
    "PrivacyInputs",
    "QsqInputs",
    "RawDataset",
    "ReducedDataset",
    "ShiftObservables",
    "TrainConfig",
    "TrainRecord",
    "TrainingDiverged",
    "analytic_gradient",
    "analytic_loss_gradient",
    "build_ansatz",
    "build_encoder",
    "circuit_unitary",
    "compose",
    "constants",
    "decomposition_constants",
    "derive_rng",
    "empty_circuit",
    "encode_features",
    "epsilon_chain",
    "estimated_gradient",
    "evaluate",
    "filter_binary",
    "general_weights",
    "gradient_epsilon",
    "jacobi_eigh",
    "lipschitz",
    "load_csv",
    "load_reduced_csv",
    "merged_general_state",
    "merged_rate",
    "noisy_expectation",
    "objective",
    "pca_reduce",
    "per_query_epsilon",
    "pl_constant",
    "povm_from_projector",
    "predicted_mean",
    "predictions",
    "qsq_coverage_floor",
    "qsq_shot_count",
    "r1_bound",
    "r2_bound",
    "readout_povm",
    "records_to_csv",
    "reduced_to_csv",
    "sample_mean_pmf",
    "sample_mean_variance",
    "sample_shots",
    "shift_parameter",
    "simulate_qsq_query",
    "smoothness",
    "split",
    "synthesize",
    "total_epsilon",
    "train",
    "utility_r1",
    "utility_r2",
    "verify_decomposition",
]
