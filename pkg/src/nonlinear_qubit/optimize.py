"""Maximisation of fidelity functionals over the feasible Gram set, and crossovers."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize as sopt

from .channels import GramParams
from .integrate import FidelityFunctional

TIE_TOL = 1e-12
REGIME_TOL = 1e-9
REGIMES = ("identity", "pi_rotation", "bit_flip", "chi_rotation", "boundary_mixed")


class NoCrossingError(ValueError):
    """The two curves do not change order on the bracket."""


@dataclass(frozen=True)
class Optimum:
    best: GramParams
    value: float
    chi: float
    regime: str


def _phase_of_best_z(W: complex) -> complex:
    return cmath.exp(-1j * cmath.phase(W)) if W != 0 else 0j


def classify(g: GramParams, tol: float = REGIME_TOL) -> str:
    if abs(g.x) <= tol and abs(g.y) <= tol:
        return "bit_flip"
    if abs(g.x - 1) <= tol and abs(g.y - 1) <= tol:
        if abs(g.z - 1) <= tol:
            return "identity"
        if abs(g.z + 1) <= tol:
            return "pi_rotation"
        if abs(abs(g.z) - 1) <= tol:
            return "chi_rotation"
    return "boundary_mixed"


def _optimum_at(f: FidelityFunctional, x: float, y: float) -> Optimum:
    z = math.sqrt(x * y) * _phase_of_best_z(f.W)
    g = GramParams(x, y, z)
    return Optimum(best=g, value=f.at(g), chi=cmath.phase(z) if z != 0 else 0.0, regime=classify(g))


def _edge_argmax(diag: float, cross: float) -> float:
    """argmax over t in [0, 1] of ``diag t^2 + 2 cross t`` with ``cross >= 0``."""
    if diag >= 0:
        return 1.0
    return min(cross / -diag, 1.0)


def maximize(f: FidelityFunctional) -> Optimum:
    """Global maximum of ``V + X x + Y y + 2 Re(W z)`` subject to ``x, y in [0, 1]``, ``|z|^2 <= x y``.

    Aligning the phase of ``z`` against ``W`` and setting ``|z| = sqrt(x y)``
    leaves ``X u^2 + Y v^2 + 2|W| u v`` with ``u = sqrt(x)``, ``v = sqrt(y)``.
    That quadratic form is homogeneous, so its maximum over the unit square is
    at the origin or on an edge ``u = 1`` or ``v = 1``.  Ties go to the
    smaller ``x + y``.
    """
    w = abs(f.W)
    candidates = [(0.0, 0.0)]
    v = _edge_argmax(f.Y, w)
    candidates.append((1.0, v * v))
    u = _edge_argmax(f.X, w)
    candidates.append((u * u, 1.0))
    optima = [_optimum_at(f, x, y) for x, y in candidates]
    top = max(o.value for o in optima)
    tied = [o for o in optima if o.value >= top - TIE_TOL]
    return min(tied, key=lambda o: o.best.x + o.best.y)


def optimal_chi(f: FidelityFunctional) -> float:
    """Phase of the optimal ``z`` when the optimum is a pure z-rotation (``x = y = 1``)."""
    opt = maximize(f)
    if abs(opt.best.x - 1) > REGIME_TOL or abs(opt.best.y - 1) > REGIME_TOL:
        raise ValueError(f"optimum is not a unitary z-rotation (regime {opt.regime})")
    chi = -cmath.phase(f.W) if f.W != 0 else 0.0
    if chi <= -math.pi:
        chi += 2 * math.pi
    return chi


def brute_force(f: FidelityFunctional, n_grid: int = 101) -> Optimum:
    """Grid search over ``(x, y)`` with a bounded local refinement; independent check of ``maximize``."""
    if n_grid < 50:
        raise ValueError("n_grid must be at least 50")
    phase = _phase_of_best_z(f.W)

    def value(xy):
        x, y = np.clip(xy, 0.0, 1.0)
        return f.V + f.X * x + f.Y * y + 2 * abs(f.W) * math.sqrt(x * y)

    grid = np.linspace(0.0, 1.0, n_grid)
    xs, ys = np.meshgrid(grid, grid, indexing="ij")
    vals = f.V + f.X * xs + f.Y * ys + 2 * abs(f.W) * np.sqrt(xs * ys)
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    start = np.array([grid[i], grid[j]])
    res = sopt.minimize(lambda p: -value(p), start, method="L-BFGS-B", bounds=[(0, 1), (0, 1)])
    x, y = (res.x if -res.fun >= vals[i, j] else start).clip(0.0, 1.0)
    z = math.sqrt(x * y) * phase
    g = GramParams(x, y, z)
    return Optimum(best=g, value=f.at(g), chi=cmath.phase(z) if z != 0 else 0.0, regime=classify(g))


def find_crossover(f, g, lo: float, hi: float, xtol: float = 1e-10) -> float:
    """Root of ``f - g`` on ``[lo, hi]``; raises ``NoCrossingError`` without a sign change."""
    diff = lambda t: f(t) - g(t)
    d_lo, d_hi = diff(lo), diff(hi)
    if d_lo == 0:
        return lo
    if d_hi == 0:
        return hi
    if np.sign(d_lo) == np.sign(d_hi):
        raise NoCrossingError(f"no sign change of f - g on [{lo}, {hi}]")
    return sopt.brentq(diff, lo, hi, xtol=xtol)
