import math

import numpy as np
import pytest
from scipy.linalg import expm

from quantacell.qubit import (
    BlochState,
    DriveConstraint,
    geometric_residual,
    lab_frame_control,
    objective_f,
    optimal_control,
    optimal_time,
    theta_at,
    validate_by_integration,
)

# roots of the power-optimality condition, frozen from an independent
# dense-grid maximization of F
X_ALPHA_1 = 2.331122370414422
X_ALPHA_HALF = 2.786498150651177
THETA_OVER_PI_ALPHA_1 = 0.742019296407103
THETA_OVER_PI_ALPHA_HALF = 0.886969909185119
F_ALPHA_1 = 0.3623056768883542
F_ALPHA_HALF = 0.5803738110678560

C1 = DriveConstraint(1.0)


def test_average_power_optimum():
    res = optimal_time(0.0, 1.0, C1, 1.0)
    assert res.attained
    assert res.t_opt == pytest.approx(X_ALPHA_1, abs=1e-12)
    assert res.theta_final / math.pi == pytest.approx(THETA_OVER_PI_ALPHA_1, abs=1e-12)
    assert res.objective == pytest.approx(F_ALPHA_1, abs=1e-12)
    assert res.power == pytest.approx(res.work / res.t_opt, abs=1e-15)
    # for theta0 = 0 the stationarity condition collapses to tan(x/2) = x/alpha
    assert math.tan(res.t_opt / 2) - res.t_opt == pytest.approx(0.0, abs=1e-9)


def test_sqrt_power_work_tradeoff_optimum():
    res = optimal_time(0.0, 1.0, C1, 0.5)
    assert res.attained
    assert res.t_opt == pytest.approx(X_ALPHA_HALF, abs=1e-12)
    assert res.theta_final / math.pi == pytest.approx(THETA_OVER_PI_ALPHA_HALF, abs=1e-12)
    assert res.objective == pytest.approx(F_ALPHA_HALF, abs=1e-12)


def test_objective_reference_point():
    assert objective_f(0.0, 1.0, C1, math.pi, 1.0) == pytest.approx(1.0 / math.pi, abs=1e-15)


def test_objective_scales_linearly_in_radius():
    f_half = objective_f(0.3, 0.5, C1, 1.7, 0.8)
    f_full = objective_f(0.3, 1.0, C1, 1.7, 0.8)
    assert f_half == pytest.approx(0.5 * f_full, abs=1e-15)


def test_gap_budget_fixes_duration_scaling():
    # doubling e_max halves the optimal duration but leaves theta_final alone
    slow = optimal_time(0.0, 1.0, DriveConstraint(1.0), 1.0)
    fast = optimal_time(0.0, 1.0, DriveConstraint(2.0), 1.0)
    assert fast.t_opt == pytest.approx(slow.t_opt / 2, abs=1e-12)
    assert fast.theta_final == pytest.approx(slow.theta_final, abs=1e-12)


def test_unattained_supremum_above_equator():
    """For alpha = 1 and theta0 >= pi/2 the best power is the T -> 0+ limit."""
    res = optimal_time(0.55 * math.pi, 0.8, C1, 1.0)
    assert not res.attained
    assert res.t_opt == 0.0
    assert res.work == 0.0
    assert res.power == pytest.approx(0.8 * math.sin(0.55 * math.pi) / 2, abs=1e-12)

    below = optimal_time(0.4 * math.pi, 0.8, C1, 1.0)
    assert below.attained
    # a half-exponent objective kills the T -> 0 limit, so the same start attains
    half = optimal_time(0.55 * math.pi, 0.8, C1, 0.5)
    assert half.attained


def test_geometric_residual_vanishes_at_attained_optima():
    for theta0, alpha in ((0.0, 1.0), (0.0, 0.5), (0.3, 0.7), (0.4 * math.pi, 1.0)):
        res = optimal_time(theta0, 1.0, C1, alpha)
        assert res.attained
        assert geometric_residual(theta0, C1, res.t_opt, alpha) == pytest.approx(
            0.0, abs=1e-9
        )
    # scales linearly with r
    val = geometric_residual(0.2, C1, 1.0, 1.0, r=0.5)
    full = geometric_residual(0.2, C1, 1.0, 1.0)
    assert val == pytest.approx(0.5 * full, abs=1e-15)


def test_optimal_control_saturates_gap_transversally():
    v = optimal_control(BlochState(r=1.0, theta=0.3, phi=0.9), DriveConstraint(1.6))
    assert v.vz == 0.0
    assert v.amplitude == pytest.approx(0.8, abs=1e-15)
    assert v.gap == pytest.approx(1.6, abs=1e-15)
    # the drive is normal to the state's meridian plane
    meridian = np.array([math.cos(0.9), math.sin(0.9), 0.0])
    assert np.dot([v.vx, v.vy, v.vz], meridian) == pytest.approx(0.0, abs=1e-15)


def test_lab_frame_control_tracks_precession():
    c = DriveConstraint(1.2)
    s = BlochState(r=1.0, theta=0.4, phi=0.7)
    assert lab_frame_control(s, c, eps=1.5, t=0.0) == optimal_control(s, c)
    v = lab_frame_control(s, c, eps=1.5, t=2.0)
    assert v.amplitude == pytest.approx(0.6, abs=1e-15)


def test_lab_frame_evolution_matches_rotating_frame_prediction():
    """Integrating the full lab Hamiltonian reproduces th_t = th0 + e t and
    the azimuth drift phi0 - eps t, which is the claim the co-rotating shortcut
    rests on."""
    eps, e, T = 1.7, 1.3, 2.0
    theta0, phi0 = 0.3, 0.9
    c = DriveConstraint(e)
    s = BlochState(r=1.0, theta=theta0, phi=phi0)
    h0 = np.diag([0.0, eps]).astype(complex)

    w, vecs = np.linalg.eigh(s.density_matrix())
    psi = vecs[:, int(np.argmax(w))]
    steps = 4000
    dt = T / steps
    for i in range(steps):
        t_mid = (i + 0.5) * dt
        h = h0 + lab_frame_control(s, c, eps, t_mid).matrix()
        psi = expm(-1j * h * dt) @ psi

    final = BlochState.from_density_matrix(np.outer(psi, psi.conj()))
    assert final.theta == pytest.approx(theta0 + e * T, abs=1e-5)
    want_phi = (phi0 - eps * T) % (2 * math.pi)
    assert final.phi == pytest.approx(want_phi, abs=1e-4)


def test_rk4_integration_confirms_linear_angle_growth():
    c = DriveConstraint(1.4)
    s = BlochState(r=1.0, theta=0.2, phi=0.5)
    dev = validate_by_integration(s, c, 2.0 * math.pi / 1.4)
    assert dev <= 1e-6
    assert validate_by_integration(BlochState(r=0.0, theta=0.0), c, 1.0) == 0.0
    mixed = validate_by_integration(BlochState(r=0.6, theta=0.9), c, 2.0)
    assert mixed <= 1e-6


def test_theta_at_and_validation_errors():
    assert theta_at(0.2, DriveConstraint(2.0), 1.5) == pytest.approx(3.2)
    with pytest.raises(ValueError):
        theta_at(0.2, C1, -0.1)
    with pytest.raises(ValueError):
        objective_f(0.0, 1.0, C1, 0.0, 1.0)
    with pytest.raises(ValueError):
        objective_f(0.0, 1.5, C1, 1.0, 1.0)
    with pytest.raises(ValueError, match="alpha"):
        optimal_time(0.0, 1.0, C1, 0.0)
    with pytest.raises(ValueError):
        optimal_time(math.pi, 1.0, C1, 1.0)
    with pytest.raises(ValueError, match="steps too small"):
        validate_by_integration(BlochState(r=1.0, theta=0.1), C1, 1.0, steps=50)
    with pytest.raises(ValueError):
        DriveConstraint(0.0)
    with pytest.raises(ValueError):
        BlochState(r=1.2, theta=0.0)
    with pytest.raises(ValueError):
        BlochState(r=0.5, theta=3.5)


def test_bloch_round_trip():
    s = BlochState(r=0.7, theta=1.1, phi=2.3)
    back = BlochState.from_density_matrix(s.density_matrix())
    assert back.r == pytest.approx(0.7, abs=1e-12)
    assert back.theta == pytest.approx(1.1, abs=1e-12)
    assert back.phi == pytest.approx(2.3, abs=1e-12)
