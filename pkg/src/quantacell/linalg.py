"""Dense complex linear algebra and state primitives for small qubit registers.

Conventions, used everywhere downstream:

* site 0 is the slowest-varying (leftmost) tensor factor, so the computational
  basis index of a bit string is big-endian: index = sum_k bit_k * 2^(n-1-k);
* Hermitian matrix functions (propagators in particular) are evaluated through
  the eigendecomposition, never through a power series;
* entropies are reported in bits (log base 2).

All functions are pure; arrays passed in are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Spectrum",
    "hermitian_eig",
    "evolve",
    "evolve_density",
    "tensor",
    "embed_local",
    "partial_trace",
    "vn_entropy",
    "fs_angle",
    "path_length",
]

# Relative Hermiticity slack: max |M - M^dag| <= HERM_TOL * max entry magnitude.
HERM_TOL = 1e-12


@dataclass(frozen=True)
class Spectrum:
    """Eigendecomposition of a Hermitian operator.

    eigenvalues are ascending; eigenvectors holds the matching orthonormal
    eigenvectors as columns, so H = vectors @ diag(values) @ vectors^dag.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_square(m, name="operator"):
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    return a


def _require_hermitian(h, name="operator"):
    a = _as_square(h, name)
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    dev = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if dev > HERM_TOL * scale:
        raise ValueError(f"{name} is not Hermitian: max |M - M^dag| = {dev:.3e}")
    return a


def _as_state(psi, name="state"):
    v = np.asarray(psi, dtype=complex)
    if v.ndim != 1:
        raise ValueError(f"{name} must be a vector, got shape {v.shape}")
    return v


def hermitian_eig(h) -> Spectrum:
    """Eigendecomposition with ascending eigenvalues and orthonormal columns."""
    a = _require_hermitian(h)
    values, vectors = np.linalg.eigh(a)
    return Spectrum(eigenvalues=values, eigenvectors=vectors)


def evolve(h, t: float, psi) -> np.ndarray:
    """Apply exp(-i h t) to a pure state via the eigendecomposition of h."""
    spec = hermitian_eig(h)
    v = _as_state(psi)
    if v.shape[0] != spec.eigenvalues.shape[0]:
        raise ValueError(
            f"dimension mismatch: operator dim {spec.eigenvalues.shape[0]}, "
            f"state dim {v.shape[0]}"
        )
    phases = np.exp(-1j * spec.eigenvalues * t)
    return spec.eigenvectors @ (phases * (spec.eigenvectors.conj().T @ v))


def evolve_density(h, t: float, rho) -> np.ndarray:
    """Conjugate a density matrix by exp(-i h t)."""
    spec = hermitian_eig(h)
    r = _as_square(rho, "density matrix")
    if r.shape[0] != spec.eigenvalues.shape[0]:
        raise ValueError(
            f"dimension mismatch: operator dim {spec.eigenvalues.shape[0]}, "
            f"state dim {r.shape[0]}"
        )
    phases = np.exp(-1j * spec.eigenvalues * t)
    u = spec.eigenvectors * phases  # columns scaled: U = V diag(phases) V^dag
    u = u @ spec.eigenvectors.conj().T
    return u @ r @ u.conj().T


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two operators or two state vectors."""
    x = np.asarray(a, dtype=complex)
    y = np.asarray(b, dtype=complex)
    if x.ndim != y.ndim or x.ndim not in (1, 2):
        raise ValueError(
            f"tensor needs two operators or two states, got ndim {x.ndim} and {y.ndim}"
        )
    return np.kron(x, y)


def embed_local(op, site: int, n_sites: int) -> np.ndarray:
    """Place a single-qubit operator on `site` of an n_sites register.

    Site 0 is the leftmost factor: embed_local(op, k, n) =
    I_(2^k) otimes op otimes I_(2^(n-k-1)).
    """
    a = _as_square(op, "single-qubit operator")
    if a.shape != (2, 2):
        raise ValueError(f"expected a 2x2 operator, got shape {a.shape}")
    if not 0 <= site < n_sites:
        raise ValueError(f"site {site} out of range for {n_sites} qubits")
    left = np.eye(2**site, dtype=complex)
    right = np.eye(2 ** (n_sites - site - 1), dtype=complex)
    return np.kron(np.kron(left, a), right)


def partial_trace(rho, keep, n_sites: int) -> np.ndarray:
    """Reduced density matrix on the `keep` sites of an n_sites qubit register.

    Parameters
    ----------
    rho : (2^n, 2^n) density matrix.
    keep : iterable of site indices to retain; the reduced matrix carries them
        in ascending site order.
    n_sites : register size n.

    The matrix is reshaped to a rank-2n tensor (row sites then column sites,
    site 0 slowest) and the complement sites are contracted pairwise.
    """
    r = _as_square(rho, "density matrix")
    keep = sorted(set(int(k) for k in keep))
    if not keep:
        raise ValueError("keep set must be non-empty")
    if keep[0] < 0 or keep[-1] >= n_sites:
        raise ValueError(f"keep sites {keep} out of range for {n_sites} qubits")
    dim = 2**n_sites
    if r.shape[0] != dim:
        raise ValueError(f"expected dim {dim} for {n_sites} qubits, got {r.shape[0]}")

    tens = r.reshape((2,) * (2 * n_sites))
    # einsum subscripts: kept row sites get fresh output labels, traced sites
    # share one label between their row and column leg.
    row = list(range(n_sites))
    col = [n_sites + k if k in keep else k for k in range(n_sites)]
    out = [k for k in keep] + [n_sites + k for k in keep]
    reduced = np.einsum(tens, row + col, out)
    d_keep = 2 ** len(keep)
    return reduced.reshape(d_keep, d_keep)


def vn_entropy(rho) -> float:
    """Von Neumann entropy in bits; eigenvalues below 1e-15 contribute zero."""
    r = _require_hermitian(rho, "density matrix")
    p = np.linalg.eigvalsh(r)
    p = p[p > 1e-15]
    return float(-np.sum(p * np.log2(p)))


def fs_angle(psi, phi) -> float:
    """Fubini-Study angle arccos |<psi|phi>|, clamped into [0, pi/2]."""
    a = _as_state(psi)
    b = _as_state(phi, "state")
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    overlap = np.clip(np.abs(np.vdot(a, b)), 0.0, 1.0)
    return float(np.arccos(overlap))


def path_length(trajectory) -> float:
    """Discretized Fubini-Study length: sum of fs_angle over consecutive pairs."""
    states = [_as_state(s) for s in trajectory]
    if len(states) < 2:
        raise ValueError("trajectory needs at least 2 states")
    return float(sum(fs_angle(a, b) for a, b in zip(states[:-1], states[1:])))
