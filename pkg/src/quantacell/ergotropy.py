"""Passive states, ergotropy, and battery capacity.

A battery is a reference Hamiltonian h0 plus a state rho. Cyclic unitaries
preserve the spectrum of rho, so the least-energetic reachable state is the
passive arrangement (populations non-increasing with energy) and the most
energetic is the active one (non-decreasing).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import _as_square, _require_hermitian, hermitian_eig

__all__ = [
    "BatterySpec",
    "ChargeReport",
    "passive_state",
    "active_state",
    "ergotropy",
    "capacity",
    "majorizes",
    "charge_report",
]


@dataclass(frozen=True)
class BatterySpec:
    h0: np.ndarray
    state: np.ndarray

    def __post_init__(self):
        h = _require_hermitian(self.h0, "h0")
        rho = _require_hermitian(self.state, "state")
        if h.shape != rho.shape:
            raise ValueError(
                f"h0 dim {h.shape[0]} does not match state dim {rho.shape[0]}"
            )
        if abs(np.trace(rho).real - 1.0) > 1e-10:
            raise ValueError(f"state trace {np.trace(rho).real} is not 1")
        if np.linalg.eigvalsh(rho).min() < -1e-10:
            raise ValueError("state has a negative eigenvalue beyond tolerance")
        object.__setattr__(self, "h0", h)
        object.__setattr__(self, "state", rho)


@dataclass(frozen=True)
class ChargeReport:
    energy: float
    passive_energy: float
    active_energy: float
    ergotropy: float
    capacity: float


def _populations(rho):
    # eigvalsh returns ascending; tiny negatives from rounding are clipped
    p = np.linalg.eigvalsh(_as_square(rho, "density matrix"))
    return np.clip(p, 0.0, None)


def _rearranged(spec: BatterySpec, descending: bool) -> np.ndarray:
    """State with rho's populations rearranged along the h0 eigenbasis."""
    basis = hermitian_eig(spec.h0).eigenvectors
    p = np.sort(_populations(spec.state))
    if descending:
        p = p[::-1]
    # energies ascend with the column index, so this pairs populations with
    # energies in the requested order
    return (basis * p) @ basis.conj().T


def passive_state(spec: BatterySpec) -> np.ndarray:
    """Populations non-increasing with energy: no cyclic work left."""
    return _rearranged(spec, descending=True)


def active_state(spec: BatterySpec) -> np.ndarray:
    """Populations non-decreasing with energy: the fully charged arrangement."""
    return _rearranged(spec, descending=False)


def _energy(h0, rho) -> float:
    return float(np.real(np.trace(h0 @ rho)))


def ergotropy(spec: BatterySpec) -> float:
    """Extractable work tr(h0 rho) - tr(h0 pi)."""
    return _energy(spec.h0, spec.state) - _energy(spec.h0, passive_state(spec))


def capacity(spec: BatterySpec) -> float:
    """Energy span tr(h0 omega) - tr(h0 pi) reachable by cyclic unitaries."""
    return _energy(spec.h0, active_state(spec)) - _energy(spec.h0, passive_state(spec))


def charge_report(spec: BatterySpec) -> ChargeReport:
    e = _energy(spec.h0, spec.state)
    e_pass = _energy(spec.h0, passive_state(spec))
    e_act = _energy(spec.h0, active_state(spec))
    return ChargeReport(
        energy=e,
        passive_energy=e_pass,
        active_energy=e_act,
        ergotropy=e - e_pass,
        capacity=e_act - e_pass,
    )


def majorizes(p, q) -> bool:
    """True iff every partial sum of descending-sorted p dominates q's.

    Both arguments must be probability vectors of equal length (sum 1 +- 1e-10);
    domination is accepted down to a -1e-12 slack.
    """
    a = np.asarray(p, dtype=float)
    b = np.asarray(q, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    for name, v in (("p", a), ("q", b)):
        if abs(v.sum() - 1.0) > 1e-10:
            raise ValueError(f"{name} sums to {v.sum()}, not 1")
    pa = np.cumsum(np.sort(a)[::-1])
    pb = np.cumsum(np.sort(b)[::-1])
    return bool(np.all(pa - pb >= -1e-12))
