import math

import numpy as np
import pytest

from quantacell.arrays import speed_limit_bounds
from quantacell.linalg import evolve
from quantacell.timeopt import (
    OptimizationConfig,
    charging_time,
    clamp_spectrum,
    entropy_trace,
    optimize,
)
from quantacell.timeopt import _herm_from_params, _params_from_herm, _thread_count


def basis(dim, i):
    v = np.zeros(dim, dtype=complex)
    v[i] = 1.0
    return v


def oracle_projector(n, lam):
    d = 2**n
    plus = (basis(d, 0) + basis(d, d - 1)) / math.sqrt(2)
    return lam * np.outer(plus, plus.conj())


def binary_entropy(p):
    out = 0.0
    for q in (p, 1.0 - p):
        if q > 1e-15:
            out -= q * math.log2(q)
    return out


def test_clamp_moves_spectrum_onto_the_box():
    h = np.diag([-1.0, 3.0]).astype(complex)
    w = np.linalg.eigvalsh(clamp_spectrum(h, 1.0))
    assert np.allclose(w, [0.0, 1.0], atol=1e-12)


def test_clamp_is_idempotent_and_keeps_eigenvectors():
    rng = np.random.default_rng(1)
    g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = 0.5 * (g + g.conj().T)
    c1 = clamp_spectrum(h, 2.0)
    c2 = clamp_spectrum(c1, 2.0)
    assert np.max(np.abs(c1 - c2)) < 1e-10
    w = np.linalg.eigvalsh(c1)
    assert w[0] == pytest.approx(0.0, abs=1e-12)
    assert w[-1] == pytest.approx(2.0, abs=1e-12)
    # an affine spectral map commutes with the original operator
    comm = h @ c1 - c1 @ h
    assert np.max(np.abs(comm)) < 1e-10


def test_clamp_degenerate_input_gives_zero():
    assert np.max(np.abs(clamp_spectrum(3.7 * np.eye(4, dtype=complex), 1.0))) == 0.0
    with pytest.raises(ValueError):
        clamp_spectrum(np.eye(2, dtype=complex), 0.0)


def test_charging_time_on_the_oracle():
    lam = 4.0
    t = charging_time(oracle_projector(4, lam), 4, 0.999)
    assert t == pytest.approx(math.pi / lam, rel=1e-5)


def test_charging_time_failures():
    assert charging_time(np.zeros((4, 4), dtype=complex), 2, 0.999) is None
    # a weakly coupled charger is slow, never faster than the bound
    lam = 2.0
    d = 4
    h = np.zeros((d, d), dtype=complex)
    h[0, -1] = h[-1, 0] = 1e-3
    h[1, 1] = lam  # spends the budget away from the transfer
    t = charging_time(clamp_spectrum(h, lam), 2, 0.999)
    assert t is None or t >= math.pi / lam
    with pytest.raises(ValueError):
        charging_time(np.zeros((4, 4), dtype=complex), 2, 1.0)
    with pytest.raises(ValueError):
        charging_time(np.zeros((4, 4), dtype=complex), 3, 0.9)


def test_hermitian_parametrization_round_trips():
    rng = np.random.default_rng(2)
    for d in (2, 4, 8):
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        h = 0.5 * (g + g.conj().T)
        back = _herm_from_params(_params_from_herm(h), d)
        assert np.max(np.abs(back - h)) < 1e-14
        x = rng.normal(size=d * d)
        assert np.max(np.abs(_params_from_herm(_herm_from_params(x, d)) - x)) < 1e-14


def test_optimize_single_qubit_finds_the_bound():
    cfg = OptimizationConfig(n=1, lam=1.0, restarts=4, seed=3)
    res = optimize(cfg)
    assert res.converged
    assert res.t_perp == pytest.approx(math.pi, rel=0.05)
    assert res.achieved_fidelity >= cfg.fidelity_target
    assert res.restarts_used == 4
    assert res.seed == 3


def test_optimize_result_invariants():
    cfg = OptimizationConfig(n=2, lam=2.0, restarts=4, seed=5, max_iters=3000)
    res = optimize(cfg)
    assert res.converged
    w = np.linalg.eigvalsh(res.hamiltonian)
    assert w[0] >= -1e-9 and w[-1] <= cfg.lam + 1e-9

    # best-so-far history is non-increasing with increasing iteration index
    iters = [i for i, _ in res.objective_history]
    times = [t for _, t in res.objective_history]
    assert iters == sorted(iters)
    assert all(b < a for a, b in zip(times, times[1:]))
    assert times[-1] == res.t_perp

    # re-simulating the returned Hamiltonian reproduces the reported fidelity
    d = 4
    psi_t = evolve(res.hamiltonian, res.t_perp, basis(d, 0))
    f = abs(np.vdot(basis(d, 3), psi_t)) ** 2
    assert f == pytest.approx(res.achieved_fidelity, abs=1e-9)

    # arrival at fidelity q can precede pi/lam by at most the q-dependent slack
    floor = (math.pi - 2 * math.acos(math.sqrt(cfg.fidelity_target))) / cfg.lam
    assert res.t_perp >= floor - 1e-9
    b = speed_limit_bounds(res.hamiltonian, basis(d, 0), basis(d, 3))
    assert res.t_perp >= max(b["mt"], b["ml"]) * (
        1 - 2 * math.acos(math.sqrt(cfg.fidelity_target)) / math.pi
    ) - 1e-9


def test_optimize_is_deterministic():
    cfg = OptimizationConfig(n=1, lam=1.0, restarts=3, seed=11)
    a = optimize(cfg)
    b = optimize(cfg)
    assert a.t_perp == b.t_perp
    assert a.objective_history == b.objective_history
    assert np.array_equal(a.hamiltonian, b.hamiltonian)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizationConfig(n=0, lam=1.0)
    with pytest.raises(ValueError):
        OptimizationConfig(n=7, lam=1.0)
    with pytest.raises(ValueError):
        OptimizationConfig(n=1, lam=0.0)
    with pytest.raises(ValueError):
        OptimizationConfig(n=1, lam=1.0, fidelity_target=1.0)
    with pytest.raises(ValueError):
        OptimizationConfig(n=1, lam=1.0, restarts=0)
    with pytest.raises(ValueError):
        OptimizationConfig(n=1, lam=1.0, seed=-1)


def test_thread_count_parsing(monkeypatch):
    monkeypatch.delenv("QUANTACELL_THREADS", raising=False)
    assert _thread_count(8) == 1
    monkeypatch.setenv("QUANTACELL_THREADS", "4")
    assert _thread_count(8) == 4
    assert _thread_count(2) == 2  # never more workers than restarts
    monkeypatch.setenv("QUANTACELL_THREADS", "not-a-number")
    assert _thread_count(8) == 1
    monkeypatch.setenv("QUANTACELL_THREADS", "0")
    assert _thread_count(8) == 1


def test_entropy_trace_matches_ghz_branch_closed_form():
    lam = 4.0
    h = oracle_projector(4, lam)
    grid = np.linspace(0.0, math.pi / lam, 41)
    trace = entropy_trace(h, 4, [0, 1], grid)
    for t, s in trace:
        want = binary_entropy(math.cos(lam * t / 2) ** 2)
        assert s == pytest.approx(want, abs=1e-9)
    assert trace[0][1] == pytest.approx(0.0, abs=1e-12)
    mid = entropy_trace(h, 4, [0, 1], [math.pi / (2 * lam)])
    assert mid[0][1] == pytest.approx(1.0, abs=1e-12)
    # the cut does not matter for a GHZ branch
    for keep in ([0], [3], [1, 2, 3]):
        s_mid = entropy_trace(h, 4, keep, [math.pi / (2 * lam)])[0][1]
        assert s_mid == pytest.approx(1.0, abs=1e-12)


def test_entropy_trace_bounds_and_validation():
    rng = np.random.default_rng(9)
    g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h = 0.5 * (g + g.conj().T)
    trace = entropy_trace(h, 3, [0, 2], np.linspace(0, 3, 31))
    for t, s in trace:
        assert -1e-12 <= s <= 1.0 + 1e-12  # min(|keep|, n-|keep|) = 1 bit here
    assert trace[0][1] == pytest.approx(0.0, abs=1e-12)
    for bad in ([], [0, 1, 2], [3], [-1]):
        with pytest.raises(ValueError):
            entropy_trace(h, 3, bad, [0.0])
    with pytest.raises(ValueError):
        entropy_trace(h, 2, [0], [0.0])
