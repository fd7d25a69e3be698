"""Quantum-battery charging: ergotropy accounting, optimal one-qubit
protocols, parallel-versus-collective array charging, and constrained
time-optimal search with entanglement tracking."""

from .arrays import (
    ArraySpec,
    ChargingOutcome,
    arrival_time,
    build_h0,
    charge,
    global_drive,
    parallel_drive,
    path_lengths,
    power_advantage,
    speed_limit_bounds,
)
from .ergotropy import (
    BatterySpec,
    ChargeReport,
    active_state,
    capacity,
    charge_report,
    ergotropy,
    majorizes,
    passive_state,
)
from .linalg import (
    Spectrum,
    embed_local,
    evolve,
    evolve_density,
    fs_angle,
    hermitian_eig,
    partial_trace,
    path_length,
    tensor,
    vn_entropy,
)
from .qubit import (
    BlochState,
    ControlVector,
    DriveConstraint,
    ProtocolResult,
    geometric_residual,
    lab_frame_control,
    objective_f,
    optimal_control,
    optimal_time,
    theta_at,
    validate_by_integration,
)
from .timeopt import (
    OptimizationConfig,
    OptimizationResult,
    charging_time,
    clamp_spectrum,
    entropy_trace,
    optimize,
)

__version__ = "0.1.0"
