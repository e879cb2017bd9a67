"""Assisted quantum-memory erasure: costs, exclusivity, protocol, recovery."""

from .costs import (
    AssistedCostResult,
    ErasureReport,
    KoashiWinterReport,
    OptimizerConfig,
    assisted_cost,
    avg_conditional_entropy,
    concurrence,
    conditional_vn_entropy_cq,
    eof_pure,
    eof_two_qubit,
    exclusivity_dd,
    holevo_chi,
    koashi_winter_check,
    one_way_classical_corr,
    unassisted_cost,
)
from .entropy import binary_entropy, shannon_entropy, von_neumann_entropy
from .linalg import ValidationError, eig_hermitian, trace_distance
from .measurements import (
    ConditionalEnsemble,
    ProjectiveBasis,
    RankOnePOVM,
    bloch_projectors,
    complementarity,
    conditional_ensemble,
    dephase,
    joint_distribution,
    outcome_distribution,
)
from .protocol import (
    CorrectionTable,
    LhsModel,
    ProtocolRunRecord,
    SteeringCertificate,
    certify_steering,
    lhs_eve_strategy,
    lhs_floor,
    matched_strategy,
    observed_assisted_cost,
    optimized_strategy,
    simulate_protocol,
    szilard_verify,
    unassisted_dephased_cost,
    wrong_basis_strategy,
)
from .recovery import (
    BlockState,
    CompressionPlan,
    RecoveryAdversary,
    compression_plan,
    ledger_check,
    run_dd_recovery,
    run_sdi_recovery,
)
from .states import (
    DensityMatrix,
    Purification,
    bell_state,
    classically_correlated,
    partial_trace,
    permute_subsystems,
    purify,
    random_density,
    random_separable,
    tensor,
    werner_state,
)
from .werner import Crossings, WernerRow, crossings, sweep, werner_closed_forms

__version__ = "0.1.0"
