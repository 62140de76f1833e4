"""Single-qubit algebra on the Bloch sphere.

Pure states are complex arrays of shape ``(..., 2)`` and density matrices are
complex arrays of shape ``(..., 2, 2)``.  Every function broadcasts over the
leading axes so that quadrature grids can be evaluated in one call.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

TOL = 1e-12


class BlochAngles(NamedTuple):
    """Polar angle ``theta`` and azimuth ``phi`` (radians, scalars or arrays)."""

    theta: np.ndarray | float
    phi: np.ndarray | float


def state_from_angles(theta, phi) -> np.ndarray:
    """Return ``cos(theta/2)|0> + exp(i phi) sin(theta/2)|1>``.

    ``theta`` is used literally, so values outside ``[0, pi]`` are allowed
    (a shifted target ``theta - alpha`` may be negative).
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    theta, phi = np.broadcast_arrays(theta, phi)
    out = np.empty(theta.shape + (2,), dtype=complex)
    out[..., 0] = np.cos(theta / 2)
    out[..., 1] = np.exp(1j * phi) * np.sin(theta / 2)
    return out


def orthogonal_state(theta, phi) -> np.ndarray:
    """The ORTHOG image ``|psi(theta - pi, phi)>``, orthogonal to the input."""
    return state_from_angles(np.asarray(theta, dtype=float) - np.pi, phi)


def rotate_phase(state: np.ndarray, beta: float) -> np.ndarray:
    """Apply ``R_z(beta) = diag(exp(-i beta/2), exp(i beta/2))``."""
    state = np.asarray(state, dtype=complex)
    out = np.empty_like(state)
    out[..., 0] = np.exp(-0.5j * beta) * state[..., 0]
    out[..., 1] = np.exp(0.5j * beta) * state[..., 1]
    return out


def density_of(state: np.ndarray) -> np.ndarray:
    """Rank-one projector ``|psi><psi|``."""
    state = np.asarray(state, dtype=complex)
    return state[..., :, None] * state[..., None, :].conj()


def check_density(rho: np.ndarray, tol: float = TOL) -> None:
    """Raise ``ValueError`` unless every matrix in ``rho`` is a valid qubit state."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-2:] != (2, 2):
        raise ValueError(f"expected 2x2 matrices, got shape {rho.shape}")
    if np.any(np.abs(rho[..., 0, 1] - rho[..., 1, 0].conj()) > tol):
        raise ValueError("density matrix is not Hermitian")
    diag0 = rho[..., 0, 0]
    diag1 = rho[..., 1, 1]
    if np.any(np.abs(diag0.imag) > tol) or np.any(np.abs(diag1.imag) > tol):
        raise ValueError("density matrix has complex diagonal")
    if np.any(np.abs(diag0.real + diag1.real - 1.0) > tol):
        raise ValueError("density matrix trace differs from one")
    det = (diag0 * diag1 - rho[..., 0, 1] * rho[..., 1, 0]).real
    if np.any(det < -tol) or np.any(diag0.real < -tol) or np.any(diag1.real < -tol):
        raise ValueError("density matrix is not positive semidefinite")


def fidelity(state: np.ndarray, rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Overlap ``<psi|rho|psi>`` of a pure target with a produced state.

    A non-Hermitian ``rho`` means a malformed channel output and is rejected.
    """
    state = np.asarray(state, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    if np.any(np.abs(rho - np.swapaxes(rho, -1, -2).conj()) > tol):
        raise ValueError("fidelity requires a Hermitian density matrix")
    value = np.einsum("...i,...ij,...j->...", state.conj(), rho, state)
    return value.real
