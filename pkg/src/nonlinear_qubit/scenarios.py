"""Named experiments: nonlinear rotation, partial ORTHOG, partial theta-shift and the linear baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .channels import GramParams
from .integrate import (
    DEFAULT_QUAD,
    MEASUREMENT_SCHEMES,
    FidelityFunctional,
    QuadratureSpec,
    TargetMap,
    extract_functional,
    general_map,
    linear_map,
    measurement_fidelity,
    orthog_map,
    quantum_fidelity,
    rotation_map,
)
from .optimize import Optimum, find_crossover, maximize

FAMILIES = ("rotation", "orthog", "general", "linear_baseline")
SWEEP_PARAMETERS = ("delta", "beta", "alpha")
DEFAULT_POINTS = 97
FIGURE5_BETAS = tuple(k * math.pi / 6 for k in range(1, 6))

IDENTITY_GRAM = GramParams(1, 1, 1)
PI_ROTATION_GRAM = GramParams(1, 1, -1)
BIT_FLIP_GRAM = GramParams(0, 0, 0)


def scheme_label(scheme) -> str:
    if isinstance(scheme, GramParams):
        z = scheme.z
        return f"quantum_fixed:{scheme.x:g}:{scheme.y:g}:{z.real:g}:{z.imag:g}"
    return scheme


def parse_scheme(token: str):
    """``rho1`` ... ``quantum_optimal`` or ``quantum_fixed:x:y:re:im``."""
    token = token.strip()
    if token.startswith("quantum_fixed"):
        parts = token.split(":")[1:]
        if len(parts) not in (3, 4):
            raise ValueError(f"quantum_fixed expects x:y:re[:im], got {token!r}")
        x, y, re_z, *rest = map(float, parts)
        g = GramParams(x, y, complex(re_z, rest[0] if rest else 0.0))
        if not g.is_feasible():
            raise ValueError(f"infeasible Gram point in {token!r}")
        return g
    if token not in MEASUREMENT_SCHEMES and token != "quantum_optimal":
        raise ValueError(f"unknown scheme {token!r}")
    return token


@dataclass(frozen=True)
class ScenarioRequest:
    family: str
    delta: float = math.pi / 2
    beta: float = 0.0
    alpha: float = 0.0
    schemes: tuple = ("quantum_optimal",)
    quad: QuadratureSpec = DEFAULT_QUAD

    def __post_init__(self):
        schemes = tuple(s if isinstance(s, GramParams) else parse_scheme(s) for s in self.schemes)
        object.__setattr__(self, "schemes", schemes)
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        for name in ("delta", "beta", "alpha"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        delta_max = math.pi / 2 if self.family == "orthog" else math.pi
        if self.family != "linear_baseline" and not 0 <= self.delta <= delta_max + 1e-6:
            raise ValueError(f"delta must lie in [0, {delta_max:.6g}] for family {self.family}")
        if self.family in ("general", "linear_baseline") and not 0 <= self.alpha <= math.pi + 1e-6:
            raise ValueError("alpha must lie in [0, pi]")
        if not self.schemes:
            raise ValueError("at least one scheme is required")
        if "rho3" in self.schemes and self.family != "rotation":
            raise ValueError("rho3 is only defined for the rotation family")

    def target_map(self) -> TargetMap:
        delta = min(self.delta, math.pi / 2 if self.family == "orthog" else math.pi)
        if self.family == "rotation":
            return rotation_map(delta, self.beta)
        if self.family == "orthog":
            return orthog_map(delta)
        if self.family == "general":
            return general_map(delta, self.alpha)
        return linear_map(self.alpha)

    @property
    def default_parameter(self) -> str:
        return "alpha" if self.family == "linear_baseline" else "delta"


@dataclass(frozen=True)
class CurvePoint:
    abscissa: float
    fidelities: dict = field(default_factory=dict)
    optimum: Optimum | None = None


@lru_cache(maxsize=4096)
def functional_for(tmap: TargetMap, q: QuadratureSpec = DEFAULT_QUAD) -> FidelityFunctional:
    return extract_functional(tmap, q)


def run(req: ScenarioRequest, abscissa: float | None = None) -> CurvePoint:
    tmap = req.target_map()
    fids = {}
    optimum = None
    for scheme in req.schemes:
        label = scheme_label(scheme)
        if isinstance(scheme, GramParams):
            fids[label] = quantum_fidelity(scheme, tmap, req.quad)
        elif scheme == "quantum_optimal":
            optimum = maximize(functional_for(tmap, req.quad))
            fids[label] = optimum.value
        else:
            fids[label] = measurement_fidelity(scheme, tmap, req.quad, beta=req.beta)
    if abscissa is None:
        abscissa = getattr(req, req.default_parameter)
    return CurvePoint(abscissa=float(abscissa), fidelities=fids, optimum=optimum)


def sweep_grid(lo: float, hi: float, n_points: int = DEFAULT_POINTS) -> np.ndarray:
    if n_points < 2:
        raise ValueError("a sweep needs at least two points")
    if not hi > lo:
        raise ValueError("empty sweep range")
    return np.linspace(lo, hi, n_points)


def sweep(template: ScenarioRequest, parameter: str, lo: float, hi: float, n_points: int = DEFAULT_POINTS) -> list[CurvePoint]:
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"cannot sweep {parameter!r}")
    return [run(replace(template, **{parameter: float(v)}), abscissa=v) for v in sweep_grid(lo, hi, n_points)]


def _scan_switches(curves: dict, lo: float, hi: float, n_scan: int, margin: float = 1e-9):
    """Locate changes of the leading curve; ties within ``margin`` are not counted as leaders."""
    labels = list(curves)
    grid = sweep_grid(lo, hi, n_scan)
    leaders = []
    for t in grid:
        vals = np.array([curves[k](t) for k in labels])
        order = np.argsort(vals)[::-1]
        if vals[order[0]] - vals[order[1]] > margin:
            leaders.append((t, labels[order[0]]))
    switches = []
    for (t0, a), (t1, b) in zip(leaders, leaders[1:]):
        if a != b:
            loc = find_crossover(curves[a], curves[b], t0, t1)
            switches.append(((a, b), loc))
    return switches


def _gram_curve(make_map, g: GramParams, q: QuadratureSpec):
    return lambda t: functional_for(make_map(t), q).at(g)


def _measurement_curve(make_map, scheme: str, q: QuadratureSpec, beta: float = 0.0):
    return lambda t: measurement_fidelity(scheme, make_map(t), q, beta=beta)


def universal_departure(q: QuadratureSpec = DEFAULT_QUAD, lo: float = 0.3, hi: float = 1.0) -> float:
    """Shift angle beyond which the whole-sphere optimum leaves the identity map.

    That happens once the negative ``Y`` coefficient outweighs ``|W|``.
    """
    fun = lambda a: functional_for(linear_map(a), q)
    return find_crossover(lambda a: -fun(a).Y, lambda a: abs(fun(a).W), lo, hi)


def crossover_report(
    family: str,
    *,
    alpha: float | None = None,
    delta: float | None = None,
    q: QuadratureSpec = DEFAULT_QUAD,
    n_scan: int = DEFAULT_POINTS,
) -> list[tuple[tuple[str, str], float]]:
    """Switch points between strategies for one family.

    * ``orthog``: identity/bit_flip for the quantum optimum and the best
      measurement preparation, both over delta.
    * ``general`` with ``alpha``: best measurement preparation over delta.
    * ``general`` without ``alpha``: departure of the whole-sphere optimum
      from the identity map, over alpha.
    * ``rotation`` with ``delta``: identity vs rotation by pi, over beta.
    """
    measurement = ("rho1", "rho2", "sigma1", "sigma2")
    if family == "orthog":
        quantum = {
            "identity": _gram_curve(orthog_map, IDENTITY_GRAM, q),
            "bit_flip": _gram_curve(orthog_map, BIT_FLIP_GRAM, q),
        }
        meas = {s: _measurement_curve(orthog_map, s, q) for s in measurement}
        return _scan_switches(quantum, 0.0, math.pi / 2, n_scan) + _scan_switches(meas, 0.0, math.pi / 2, n_scan)
    if family == "general":
        if alpha is None:
            return [(("identity", "boundary_mixed"), universal_departure(q))]
        make = lambda d: general_map(d, alpha)
        meas = {s: _measurement_curve(make, s, q) for s in measurement}
        return _scan_switches(meas, 0.0, math.pi, n_scan)
    if family == "rotation":
        if delta is None:
            raise ValueError("rotation crossovers need delta")
        make = lambda b: rotation_map(delta, b)
        curves = {
            "identity": _gram_curve(make, IDENTITY_GRAM, q),
            "pi_rotation": _gram_curve(make, PI_ROTATION_GRAM, q),
        }
        return _scan_switches(curves, 0.0, math.pi, n_scan)
    raise ValueError(f"no crossovers defined for family {family!r}")
