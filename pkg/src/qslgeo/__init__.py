"""Geometric speed limits for quantum observables.

Quantifies how fast the expectation value of an observable can change under
given dynamics, using the full family of monotone quantum metrics rather
than only the symmetric-logarithmic-derivative one, and provides the tools
around that: generalized variances and Fisher informations with
coherent/incoherent splits, bound evaluation and saturation diagnostics,
optimal-metric search, synthesis of coherent-bound-saturating Hamiltonians,
energy-variance bounds, small-system dynamics, and simplex-scan CLIs.
"""

from .errors import (
    ConfigError,
    DegenerateCoherentTerm,
    DegenerateEigenvalues,
    DimensionMismatch,
    InvalidDistribution,
    NegativeTime,
    NonPositiveArgument,
    NotHermitian,
    NotPositiveDefinite,
    NotTraceless,
    QslError,
    SingularSuperoperator,
    StateValidationDrift,
    TraceNotOne,
    WindowTooShort,
    ZeroObservable,
    ZeroObservableCoherence,
    ZeroTangent,
)
from .operators import (
    PD_FLOOR,
    DensityMatrix,
    HermitianOperator,
    SpectralDecomposition,
    TangentOperator,
    center,
    commutator_generator,
    condition_number,
    dumps_matrix,
    expectation,
    loads_matrix,
    matrix_from_json_dict,
    matrix_to_json_dict,
    seminorm,
    spectral_decompose,
    validate_density,
    variance_sld,
)
from .monotone import (
    BETA_ALIASES,
    LOG_MEAN,
    RLD,
    SLD,
    WIGNER_YANASE,
    MeanMatrix,
    MonotoneFunction,
    beta_grid,
    mean_matrix,
)
from .geometry import (
    GeometryReport,
    classical_fisher,
    generalized_variance,
    geometry_report,
    log_derivative,
    qfi,
    qfi_superop_oracle,
    split_qfi,
    split_variance,
    variance_superop_oracle,
)
from .bounds import (
    BoundReport,
    EnergyBoundReport,
    bound_nonsplit,
    bound_split,
    coherent_ratio_xi,
    energy_bounds,
    fast_hamiltonian,
    observable_speed,
    optimize_beta,
    saturation_residual,
    xi_qutrit_closed_form,
)
from .dynamics import (
    DEFAULT_DRIVE,
    DEFAULT_T_DECAY,
    OMEGA_10_MHZ,
    RATES_INVERSE_MS,
    RATES_INVERSE_US,
    SPEED_FIT_WINDOW,
    DecayChainSpec,
    DriveSpec,
    EnvModelSpec,
    ExperimentRow,
    Trajectory,
    bateman_populations,
    decay_chain_generator,
    drive_hamiltonian,
    env_incoherent_check,
    evolve,
    experiment_replica,
    lindblad_generator,
    measured_speed,
    observable_x_ge,
    partial_trace_env,
    partial_trace_sys,
    unitary_generator,
)
from .simplex import SimplexGrid, simplex_grid
from .scans import (
    ExperimentConfig,
    ScanConfig,
    ScanResult,
    ScanRow,
    Scenario,
    experiment_csv_lines,
    make_scenario,
    parse_experiment_config,
    run_experiment,
    scan_csv_lines,
    scan_energy_bounds,
    scan_fast_h,
    scan_xi,
    write_csv,
    write_summary,
)

__version__ = "0.1.0"
