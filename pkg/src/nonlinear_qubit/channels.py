"""Measure-and-prepare preparations and the qubit-plus-ancilla channel.

The quantum scheme is the isometry

    |0>|Q> -> |1>|A> + |0>|B>
    |1>|Q> -> |0>|A~> + |1>|B~>

followed by a partial trace over the ancilla.  For the target maps studied
here the sphere-averaged fidelity only depends on the Gram coordinates
``x = |B|^2``, ``y = |B~|^2`` and ``z = <B|B~>``, where the overlap is
taken linear in its first slot: ``z = sum_i B_i conj(B~_i)``.  With this
convention the optimal phase of ``z`` equals the z-rotation angle
``chi`` reported for the nonlinear rotations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bloch import BlochAngles, density_of, orthogonal_state, state_from_angles

ANCILLA_TOL = 1e-10
GRAM_TOL = 1e-12
DILATION_DIM = 4


@dataclass(frozen=True)
class GramParams:
    x: float
    y: float
    z: complex

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", complex(self.z))

    def is_feasible(self, tol: float = GRAM_TOL) -> bool:
        return (
            -tol <= self.x <= 1 + tol
            and -tol <= self.y <= 1 + tol
            and abs(self.z) ** 2 <= self.x * self.y + tol
        )

    def as_tuple(self) -> tuple[float, float, complex]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True, eq=False)
class AncillaVectors:
    """Ancilla vectors ``A, A~, B, B~`` of one quantum-scheme channel."""

    A: np.ndarray
    Atilde: np.ndarray
    B: np.ndarray
    Btilde: np.ndarray

    def __post_init__(self):
        vecs = [np.asarray(v, dtype=complex).ravel() for v in (self.A, self.Atilde, self.B, self.Btilde)]
        if len({v.size for v in vecs}) != 1 or vecs[0].size == 0:
            raise ValueError("ancilla vectors must share one positive dimension")
        for name, v in zip(("A", "Atilde", "B", "Btilde"), vecs):
            object.__setattr__(self, name, v)

    @property
    def dim(self) -> int:
        return self.A.size

    def constraint_residuals(self) -> tuple[float, float, float]:
        """Deviations from the two normalisation conditions and the orthogonality condition."""
        norm0 = np.vdot(self.A, self.A).real + np.vdot(self.B, self.B).real - 1.0
        norm1 = np.vdot(self.Atilde, self.Atilde).real + np.vdot(self.Btilde, self.Btilde).real - 1.0
        ortho = np.vdot(self.B, self.Atilde) + np.vdot(self.A, self.Btilde)
        return abs(norm0), abs(norm1), abs(ortho)

    def validate(self, tol: float = ANCILLA_TOL) -> None:
        n0, n1, orth = self.constraint_residuals()
        if n0 > tol or n1 > tol:
            raise ValueError(f"ancilla normalisation violated ({n0:.3g}, {n1:.3g})")
        if orth > tol:
            raise ValueError(f"ancilla orthogonality violated ({orth:.3g})")


def _guess_pair(guess: BlochAngles) -> tuple[np.ndarray, np.ndarray]:
    return state_from_angles(guess.theta, guess.phi), orthogonal_state(guess.theta, guess.phi)


def _overlap2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(np.sum(a.conj() * b, axis=-1)) ** 2


def _mix(p0, proj0, p1, proj1) -> np.ndarray:
    return p0[..., None, None] * proj0 + p1[..., None, None] * proj1


def prep_rho1(inp: BlochAngles, guess: BlochAngles) -> np.ndarray:
    """Measure in the guess basis and prepare the observed basis state."""
    psi = state_from_angles(*inp)
    phi, phi_perp = _guess_pair(guess)
    return _mix(_overlap2(psi, phi), density_of(phi), _overlap2(psi, phi_perp), density_of(phi_perp))


def prep_rho2(inp: BlochAngles, guess: BlochAngles) -> np.ndarray:
    """Measure in the guess basis and prepare the state orthogonal to the outcome."""
    psi = state_from_angles(*inp)
    phi, phi_perp = _guess_pair(guess)
    return _mix(_overlap2(psi, phi), density_of(phi_perp), _overlap2(psi, phi_perp), density_of(phi))


def prep_sigma1(inp: BlochAngles) -> np.ndarray:
    c2 = np.cos(np.asarray(inp.theta, dtype=float) / 2) ** 2
    out = np.zeros(c2.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c2
    out[..., 1, 1] = 1.0 - c2
    return out


def prep_sigma2(inp: BlochAngles) -> np.ndarray:
    c2 = np.cos(np.asarray(inp.theta, dtype=float) / 2) ** 2
    out = np.zeros(c2.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1.0 - c2
    out[..., 1, 1] = c2
    return out


def prep_rho3(inp: BlochAngles, guess: BlochAngles, beta: float) -> np.ndarray:
    """Measure in an upper-hemisphere guess basis, then rotate the outcome by +beta or -beta.

    The guess outcome ``phi(mu, nu)`` is prepared as ``phi(mu, nu + beta)``;
    the orthogonal outcome ``phi(mu - pi, nu)`` as ``phi(mu - pi, nu - beta)``.
    """
    mu = np.asarray(guess.theta, dtype=float)
    nu = np.asarray(guess.phi, dtype=float)
    if np.any(mu > np.pi / 2 + 1e-12) or np.any(mu < -1e-12):
        raise ValueError("rho3 guess must lie in the upper hemisphere (theta in [0, pi/2])")
    psi = state_from_angles(*inp)
    phi, phi_perp = _guess_pair(guess)
    out0 = density_of(state_from_angles(mu, nu + beta))
    out1 = density_of(orthogonal_state(mu, nu - beta))
    return _mix(_overlap2(psi, phi), out0, _overlap2(psi, phi_perp), out1)


def quantum_output(inp: BlochAngles, ch: AncillaVectors, validate: bool = True) -> np.ndarray:
    """Reduced qubit state after the isometry, with the ancilla traced out.

    With input amplitudes ``(a, b)`` the joint state is
    ``|0>(a B + b A~) + |1>(a A + b B~)``, so ``rho_ij = <v_j|v_i>``.
    """
    if validate:
        ch.validate()
    psi = state_from_angles(*inp)
    a = psi[..., 0, None]
    b = psi[..., 1, None]
    v0 = a * ch.B + b * ch.Atilde
    v1 = a * ch.A + b * ch.Btilde
    out = np.empty(psi.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = np.sum(np.abs(v0) ** 2, axis=-1)
    out[..., 1, 1] = np.sum(np.abs(v1) ** 2, axis=-1)
    out[..., 0, 1] = np.sum(v1.conj() * v0, axis=-1)
    out[..., 1, 0] = out[..., 0, 1].conj()
    return out


def buzek_unot() -> AncillaVectors:
    """Buzek-Hillery-Werner universal-NOT ancilla vectors on two ancilla qubits."""
    e = np.eye(4)
    k00, k01, k10, k11 = e
    return AncillaVectors(
        A=-np.sqrt(2 / 3) * k00,
        Atilde=np.sqrt(2 / 3) * k11,
        B=np.sqrt(1 / 6) * (k01 + k10),
        Btilde=-np.sqrt(1 / 6) * (k01 + k10),
    )


def identity_channel() -> AncillaVectors:
    zero = np.zeros(1)
    return AncillaVectors(A=zero, Atilde=zero, B=np.ones(1), Btilde=np.ones(1))


def bit_flip_channel() -> AncillaVectors:
    zero = np.zeros(1)
    return AncillaVectors(A=np.ones(1), Atilde=np.ones(1), B=zero, Btilde=zero)


def gram_of(ch: AncillaVectors) -> GramParams:
    return GramParams(
        x=np.vdot(ch.B, ch.B).real,
        y=np.vdot(ch.Btilde, ch.Btilde).real,
        z=np.vdot(ch.Btilde, ch.B),
    )


def dilate(g: GramParams) -> AncillaVectors:
    """Canonical four-dimensional ancilla realisation of a feasible Gram point.

    ``B`` and ``B~`` live in span(e1, e2); ``A`` and ``A~`` on e3 and e4, so
    the orthogonality constraint holds trivially.
    """
    if not g.is_feasible():
        raise ValueError(f"infeasible Gram parameters {g}")
    x = min(max(g.x, 0.0), 1.0)
    y = min(max(g.y, 0.0), 1.0)
    z = g.z
    B = np.zeros(DILATION_DIM, dtype=complex)
    Bt = np.zeros(DILATION_DIM, dtype=complex)
    A = np.zeros(DILATION_DIM, dtype=complex)
    At = np.zeros(DILATION_DIM, dtype=complex)
    if x > 0:
        B[0] = np.sqrt(x)
        Bt[0] = np.conj(z) / np.sqrt(x)
        Bt[1] = np.sqrt(max(y - abs(Bt[0]) ** 2, 0.0))
    elif z != 0:
        raise ValueError("x = 0 forces z = 0")
    else:
        Bt[1] = np.sqrt(y)
    A[2] = np.sqrt(1 - x)
    At[3] = np.sqrt(1 - y)
    return AncillaVectors(A=A, Atilde=At, B=B, Btilde=Bt)
