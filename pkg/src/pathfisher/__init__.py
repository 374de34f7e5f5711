"""Phase and frequency estimation with probes routed through superposed
paths: dephasing noise models, the effective M-path channel, protocol Fisher
information, continuous-time fast control, seeded maximum-likelihood
experiments, and a brute-force oracle to validate all of it."""

from .noise import (
    ConditionViolationError,
    DEFAULT_CONDITION_TOL,
    DegenerateNoiseError,
    NoiseDistribution,
    NoiseProfile,
    check_condition,
    decomposition_matrix,
    fourier_coefficient,
    gaussian_grid,
    noise_profile,
    offset_theta0,
    offset_theta1,
    phase_kick,
)
from .channel import (
    EffectiveChannelParams,
    QubitState,
    SuperposedOutput,
    apply_dephasing,
    apply_effective_channel,
    effective_channel_params,
    phase_rotation,
    random_state,
    state_h,
    state_plus,
    state_plus_i,
    state_v,
    superposed_output,
)
from .protocols import (
    FisherReport,
    OUTCOME_LABELS,
    OutcomeDistribution,
    ProtocolSpec,
    fisher_bound,
    fisher_exact,
    ghz_coherence,
    outcome_probabilities,
    outcome_probability_grid,
    phase_fisher,
)
from .continuous import (
    ContinuousModel,
    ElementwiseFactors,
    SkippedRow,
    SweepRow,
    elementwise_factors,
    figure3_sweep,
    fisher_envelope,
    fisher_omega,
    lambda_t,
    optimal_theta1,
    qubit_solution,
)
from .estimation import (
    EstimationResult,
    ExperimentConfig,
    OutcomeCounts,
    default_window,
    log_likelihood,
    log_likelihood_grid,
    mle_estimate,
    result_to_dict,
    rmse_trials,
    sample_outcomes,
)
from .oracle import (
    ENUMERATION_BUDGET,
    MultiPathState,
    OracleComparison,
    ResourceLimitError,
    compare,
    fourier_branch,
    oracle_apply_continuous,
    oracle_apply_discrete,
    oracle_continuous_round,
    oracle_effective_round,
    prepare_superposed,
)

__version__ = "0.1.0"
