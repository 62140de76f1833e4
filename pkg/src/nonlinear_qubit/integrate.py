"""Sphere quadrature, guess-basis averaging and fidelity functionals."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np

from .bloch import BlochAngles, density_of, fidelity, state_from_angles
from .channels import (
    GramParams,
    dilate,
    prep_rho1,
    prep_rho2,
    prep_rho3,
    prep_sigma1,
    prep_sigma2,
    quantum_output,
)

MEASUREMENT_SCHEMES = ("rho1", "rho2", "rho3", "sigma1", "sigma2")
FUNCTIONAL_RESIDUAL_TOL = 1e-9


class FunctionalFormError(ArithmeticError):
    """The averaged fidelity is not affine in the Gram coordinates."""


class Piece(NamedTuple):
    theta_lo: float
    theta_hi: float
    theta_shift: float = 0.0
    phi_shift: float = 0.0


@dataclass(frozen=True)
class TargetMap:
    """Piecewise target: inputs with theta in ``[lo, hi)`` go to ``(theta + dtheta, phi + dphi)``."""

    pieces: tuple[Piece, ...]

    def __post_init__(self):
        pieces = tuple(Piece(*map(float, p)) for p in self.pieces)
        object.__setattr__(self, "pieces", pieces)
        if not pieces:
            raise ValueError("target map needs at least one piece")
        if pieces[0].theta_lo != 0.0 or not math.isclose(pieces[-1].theta_hi, math.pi, abs_tol=1e-12):
            raise ValueError("pieces must cover [0, pi]")
        for prev, nxt in zip(pieces, pieces[1:]):
            if prev.theta_hi != nxt.theta_lo:
                raise ValueError("pieces must be contiguous")
        if any(p.theta_hi < p.theta_lo for p in pieces):
            raise ValueError("piece with negative width")

    @classmethod
    def from_pieces(cls, pieces) -> "TargetMap":
        """Build a map, silently dropping zero-width pieces."""
        kept = [p for p in pieces if p[1] > p[0]]
        return cls(tuple(kept))

    def target(self, theta, phi) -> BlochAngles:
        theta = np.asarray(theta, dtype=float)
        phi = np.asarray(phi, dtype=float)
        dtheta = np.zeros_like(theta)
        dphi = np.zeros_like(theta)
        for i, p in enumerate(self.pieces):
            last = i == len(self.pieces) - 1
            inside = (theta >= p.theta_lo) & ((theta <= p.theta_hi) if last else (theta < p.theta_hi))
            dtheta = np.where(inside, p.theta_shift, dtheta)
            dphi = np.where(inside, p.phi_shift, dphi)
        return BlochAngles(theta + dtheta, phi + dphi)


def identity_map() -> TargetMap:
    return TargetMap.from_pieces([(0.0, math.pi, 0.0, 0.0)])


def rotation_map(delta: float, beta: float) -> TargetMap:
    """Rotate by +beta about z for theta < delta and by -beta elsewhere."""
    return TargetMap.from_pieces([(0.0, delta, 0.0, beta), (delta, math.pi, 0.0, -beta)])


def orthog_map(delta: float) -> TargetMap:
    """Apply ORTHOG on the two polar caps of half-angle ``delta``."""
    if not 0 <= delta <= math.pi / 2:
        raise ValueError("ORTHOG delta must lie in [0, pi/2]")
    return TargetMap.from_pieces(
        [(0.0, delta, -math.pi, 0.0), (delta, math.pi - delta, 0.0, 0.0), (math.pi - delta, math.pi, -math.pi, 0.0)]
    )


def general_map(delta: float, alpha: float) -> TargetMap:
    """Shift theta by -alpha on the cap ``theta < delta``; identity elsewhere."""
    return TargetMap.from_pieces([(0.0, delta, -alpha, 0.0), (delta, math.pi, 0.0, 0.0)])


def linear_map(alpha: float) -> TargetMap:
    return TargetMap.from_pieces([(0.0, math.pi, -alpha, 0.0)])


@dataclass(frozen=True)
class QuadratureSpec:
    n_theta: int = 64
    n_phi: int = 64
    n_guess_theta: int = 64
    n_guess_phi: int = 64

    def __post_init__(self):
        if min(self.n_theta, self.n_phi, self.n_guess_theta, self.n_guess_phi) < 4:
            raise ValueError("all quadrature node counts must be at least 4")

    @classmethod
    def of_order(cls, order: int) -> "QuadratureSpec":
        return cls(order, order, order, order)

    def doubled(self) -> "QuadratureSpec":
        return replace(
            self,
            n_theta=2 * self.n_theta,
            n_phi=2 * self.n_phi,
            n_guess_theta=2 * self.n_guess_theta,
            n_guess_phi=2 * self.n_guess_phi,
        )


DEFAULT_QUAD = QuadratureSpec()


@lru_cache(maxsize=32)
def _gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _cap_nodes(theta_lo: float, theta_hi: float, n_theta: int, n_phi: int):
    """Gauss-Legendre in theta (with the sin(theta) Jacobian) times a uniform phi grid."""
    x, w = _gauss_legendre(n_theta)
    half = 0.5 * (theta_hi - theta_lo)
    theta = theta_lo + half * (x + 1.0)
    wt = half * w * np.sin(theta)
    phi = 2 * math.pi * np.arange(n_phi) / n_phi
    wp = np.full(n_phi, 2 * math.pi / n_phi)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    return th.ravel(), ph.ravel(), np.outer(wt, wp).ravel()


@lru_cache(maxsize=256)
def sphere_nodes(tmap: TargetMap, q: QuadratureSpec):
    """Input angles, target angles and normalised weights for the uniform sphere measure."""
    parts = [_cap_nodes(p.theta_lo, p.theta_hi, q.n_theta, q.n_phi) for p in tmap.pieces]
    theta = np.concatenate([p[0] for p in parts])
    phi = np.concatenate([p[1] for p in parts])
    weights = np.concatenate([p[2] for p in parts]) / (4 * math.pi)
    shifts = [
        (np.full(p[0].size, piece.theta_shift), np.full(p[0].size, piece.phi_shift))
        for p, piece in zip(parts, tmap.pieces)
    ]
    target = BlochAngles(theta + np.concatenate([s[0] for s in shifts]), phi + np.concatenate([s[1] for s in shifts]))
    for arr in (theta, phi, weights, target.theta, target.phi):
        arr.setflags(write=False)
    return BlochAngles(theta, phi), target, weights


def _weighted_sum(weights: np.ndarray, values: np.ndarray) -> float:
    return float(np.sum(weights * values))


def sphere_average(
    f: Callable[[BlochAngles, BlochAngles], np.ndarray],
    tmap: TargetMap,
    q: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Uniform average of ``f(input_angles, target_angles)`` over the Bloch sphere."""
    inp, target, weights = sphere_nodes(tmap, q)
    values = np.broadcast_to(np.asarray(f(inp, target), dtype=float), weights.shape)
    return _weighted_sum(weights, values)


# Inputs |0>, |1>, |+>, |+i> determine any map that is linear in |psi><psi|.
_PROBE_INPUTS = BlochAngles(np.array([0.0, math.pi, math.pi / 2, math.pi / 2]), np.array([0.0, 0.0, 0.0, math.pi / 2]))


def _superop_from_probe_images(images: np.ndarray) -> np.ndarray:
    """Images of |0>,|1>,|+>,|+i> -> tensor ``L[i, j]`` = image of ``|i><j|``."""
    e00, e11, plus, plus_i = images
    d = 0.5 * (e00 + e11)
    L = np.empty((2, 2, 2, 2), dtype=complex)
    L[0, 0] = e00
    L[1, 1] = e11
    L[0, 1] = (plus - d) + 1j * (plus_i - d)
    L[1, 0] = (plus - d) - 1j * (plus_i - d)
    return L


@lru_cache(maxsize=128)
def measurement_superop(scheme: str, q: QuadratureSpec = DEFAULT_QUAD, beta: float = 0.0) -> np.ndarray:
    """Guess-averaged measure-and-prepare map as a ``(2, 2, 2, 2)`` tensor.

    rho1/rho2 average the guess uniformly over the full sphere, rho3 over the
    upper hemisphere; sigma1/sigma2 use the fixed computational basis.
    """
    if scheme not in MEASUREMENT_SCHEMES:
        raise ValueError(f"unknown measurement scheme {scheme!r}")
    inp = BlochAngles(_PROBE_INPUTS.theta[:, None], _PROBE_INPUTS.phi[:, None])
    if scheme in ("sigma1", "sigma2"):
        prep = prep_sigma1 if scheme == "sigma1" else prep_sigma2
        images = prep(BlochAngles(*_PROBE_INPUTS))
    else:
        mu_max = math.pi / 2 if scheme == "rho3" else math.pi
        mu, nu, w = _cap_nodes(0.0, mu_max, q.n_guess_theta, q.n_guess_phi)
        w = w / w.sum()
        guess = BlochAngles(mu[None, :], nu[None, :])
        if scheme == "rho3":
            per_guess = prep_rho3(inp, guess, beta)
        elif scheme == "rho1":
            per_guess = prep_rho1(inp, guess)
        else:
            per_guess = prep_rho2(inp, guess)
        images = np.einsum("g,pgij->pij", w, per_guess)
    L = _superop_from_probe_images(images)
    L.setflags(write=False)
    return L


def apply_superop(L: np.ndarray, rho: np.ndarray) -> np.ndarray:
    return np.einsum("...ij,ijkl->...kl", rho, L)


def channel_superop(ch) -> np.ndarray:
    """Superoperator tensor of a quantum-scheme channel."""
    ch.validate()
    return _superop_from_probe_images(quantum_output(_PROBE_INPUTS, ch, validate=False))


@lru_cache(maxsize=1024)
def fidelity_moments(tmap: TargetMap, q: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    """Weighted sums ``M[i,j,k,l] = avg( P_ij T_lk )`` of input and target projectors.

    For any channel with tensor ``L`` the average fidelity is ``sum(L * M)``.
    """
    inp, target, weights = sphere_nodes(tmap, q)
    P = density_of(state_from_angles(*inp))
    T = density_of(state_from_angles(*target))
    prod = weights[:, None, None, None, None] * P[:, :, :, None, None] * np.swapaxes(T, -1, -2)[:, None, None, :, :]
    M = prod.sum(axis=0)
    M.setflags(write=False)
    return M


def average_fidelity(L: np.ndarray, tmap: TargetMap, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    return float(np.sum(L * fidelity_moments(tmap, q)).real)


def direct_average_fidelity(produce, tmap: TargetMap, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Node-by-node average of ``<target|produce(input)|target>``; slow reference path."""

    def integrand(inp, target):
        return fidelity(state_from_angles(*target), produce(inp))

    return sphere_average(integrand, tmap, q)


def measurement_fidelity(
    scheme: str,
    tmap: TargetMap,
    q: QuadratureSpec = DEFAULT_QUAD,
    beta: float = 0.0,
) -> float:
    """Average fidelity of a measure-and-prepare scheme against a target map."""
    L = measurement_superop(scheme, q, float(beta) if scheme == "rho3" else 0.0)
    return average_fidelity(L, tmap, q)


def quantum_fidelity(g: GramParams, tmap: TargetMap, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Average fidelity of the canonical dilation of ``g``."""
    return channel_fidelity(dilate(g), tmap, q)


def channel_fidelity(ch, tmap: TargetMap, q: QuadratureSpec = DEFAULT_QUAD) -> float:
    return average_fidelity(channel_superop(ch), tmap, q)


@dataclass(frozen=True)
class FidelityFunctional:
    """``F(x, y, z) = V + X x + Y y + 2 Re(W z)``."""

    V: float
    X: float
    Y: float
    W: complex

    def __post_init__(self):
        for name in ("V", "X", "Y"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "W", complex(self.W))

    def __call__(self, x, y, z):
        return self.V + self.X * np.asarray(x) + self.Y * np.asarray(y) + 2 * np.real(self.W * np.asarray(z))

    def at(self, g: GramParams) -> float:
        return float(self(g.x, g.y, g.z))

    def as_array(self) -> np.ndarray:
        return np.array([self.V, self.X, self.Y, self.W.real, self.W.imag])


# First five probes determine the functional; the last two over-determine it.
PROBE_GRAMS = (
    GramParams(0, 0, 0),
    GramParams(1, 0, 0),
    GramParams(0, 1, 0),
    GramParams(1, 1, 1),
    GramParams(1, 1, 1j),
    GramParams(0.5, 0.8, 0.3 - 0.4j),
    GramParams(0.9, 0.25, -0.2 + 0.35j),
)


def extract_functional(
    tmap: TargetMap,
    q: QuadratureSpec = DEFAULT_QUAD,
    tol: float = FUNCTIONAL_RESIDUAL_TOL,
) -> FidelityFunctional:
    """Fit ``(V, X, Y, W)`` from averaged fidelities of probe channels."""
    rows = np.array([[1.0, g.x, g.y, 2 * g.z.real, -2 * g.z.imag] for g in PROBE_GRAMS])
    values = np.array([quantum_fidelity(g, tmap, q) for g in PROBE_GRAMS])
    coef, *_ = np.linalg.lstsq(rows, values, rcond=None)
    residual = float(np.max(np.abs(rows @ coef - values)))
    if residual > tol:
        raise FunctionalFormError(f"averaged fidelity is not affine in the Gram coordinates (residual {residual:.3g})")
    return FidelityFunctional(coef[0], coef[1], coef[2], complex(coef[3], coef[4]))


def orthog_coefficients_raw(delta: float) -> tuple[float, float, float]:
    """Closed-form ``(X, Y, Z)`` in ``F = X + Y(x + y) + Z(z + conj z)`` for partial ORTHOG."""
    c3 = math.cos(3 * (math.pi - delta)) - math.cos(3 * delta)
    c2 = math.cos(2 * (math.pi - delta)) - math.cos(2 * delta)
    cd = math.cos(delta)
    big_x = 2 / 3 + c3 / 24 - cd / 4
    big_y = -1 / 6 - c2 / 8 - c3 / 24 + cd / 4
    big_z = -1 / 6 + c3 / 48 + 3 * cd / 8
    return big_x, big_y, big_z


def orthog_coefficients(delta: float) -> FidelityFunctional:
    if not 0 <= delta <= math.pi / 2:
        raise ValueError("ORTHOG delta must lie in [0, pi/2]")
    big_x, big_y, big_z = orthog_coefficients_raw(delta)
    return FidelityFunctional(big_x, big_y, big_y, big_z)


def general_coefficients(alpha: float) -> FidelityFunctional:
    """Closed-form functional for the whole-sphere shift ``theta -> theta - alpha``."""
    if not 0 <= alpha <= math.pi:
        raise ValueError("alpha must lie in [0, pi]")
    c = math.cos(alpha) / 6
    s = math.pi / 8 * math.sin(alpha)
    return FidelityFunctional(0.5 - c, c + s, c - s, c)
