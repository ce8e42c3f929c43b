"""Robust directional-modulation beamforming for multi-user MISO secrecy.

Library + CLI for designing signal/artificial-noise covariances that maximize
the worst-case sum secrecy rate of a uniform-linear-array downlink when the
eavesdropper direction angles are only known up to a truncated von Mises
error.  Two robust designers (expected-covariance and worst-case norm-bounded
error), zero-forcing and SLNR baselines, and a Monte Carlo evaluation harness.
"""

from .model import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    ChannelVector,
    Scenario,
    ScenarioError,
    VonMisesParams,
    channel,
    dbm_to_watts,
    default_eve_angles,
    default_user_angles,
    load_scenario,
    path_loss,
    steering_vector,
    reference_scenario,
    watts_to_dbm,
)
from .vonmises import (
    ExpectedCovariance,
    bessel_i0,
    bessel_i0_scaled,
    erf,
    expected_covariance,
    sample_truncated_vonmises,
    upsilon1,
    upsilon2,
    vonmises_pdf,
)
from .errbound import ErrorBound, channel_perturbation, epsilon_bound, scenario_error_bounds
from .secrecy import (
    BeamformerSet,
    SecrecyReport,
    monte_carlo_secrecy,
    sinr_eve,
    sinr_user,
    sum_secrecy_rate,
)
from .sca import (
    ConeConstraint,
    ConicProgram,
    SCAOptions,
    SCAResult,
    build_maee_subproblem,
    build_vmd_subproblem,
    extract_rank_one,
    linearization_points_maee,
    linearization_points_vmd,
    maee_true_objective,
    sca_maee,
    sca_vmd,
    solve_conic,
    vmd_true_objective,
)
from .baselines import PowerSplit, slnr_beamformers, zf_beamformers
from .sweeps import (
    ComplexityParams,
    SweepRow,
    SweepSpec,
    apply_axis,
    complexity_estimate,
    emit_results,
    read_results,
    run_sweep,
)

__version__ = "0.1.0"
