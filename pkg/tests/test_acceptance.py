"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS`` or ``FAIL`` line with the measured values.
Run ``python tests/test_acceptance.py`` (or ``pytest -s``) to see them.
"""

import math

import numpy as np
import pytest

from nonlinear_qubit.bloch import BlochAngles, check_density
from nonlinear_qubit.channels import buzek_unot, gram_of, quantum_output
from nonlinear_qubit.integrate import (
    DEFAULT_QUAD,
    channel_fidelity,
    extract_functional,
    general_map,
    identity_map,
    linear_map,
    measurement_fidelity,
    orthog_map,
    rotation_map,
)
from nonlinear_qubit.optimize import brute_force, maximize, optimal_chi
from nonlinear_qubit.scenarios import ScenarioRequest, crossover_report, run

from conftest import random_feasible_gram, random_isometry_channels
from test_integrate import SCENARIO_MAPS
from test_optimize import random_functional


def close(label, value, expected, tol):
    return label, abs(value - expected) <= tol, f"{label}={value:.10g} (want {expected:.10g} +/- {tol:g})"


def verdict(number: int, title: str, checks) -> None:
    ok = all(c[1] for c in checks)
    details = "; ".join(c[2] for c in checks if not c[1]) if not ok else f"{len(checks)} checks"
    print(f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {title} [{details}]")
    assert ok, details


def test_criterion_01_sigma1_trivial_map():
    v = measurement_fidelity("sigma1", identity_map())
    verdict(1, "sigma1 on the trivial map is 2/3", [close("F", v, 2 / 3, 1e-9)])


def test_criterion_02_sigma1_rotation():
    checks = []
    for beta in (0.3, 1.0, 2.5):
        for delta in (0.5, math.pi / 2, 2.5):
            v = measurement_fidelity("sigma1", rotation_map(delta, beta))
            checks.append(close(f"F(beta={beta:.3g},delta={delta:.3g})", v, 2 / 3, 1e-9))
    verdict(2, "sigma1 under nonlinear rotations is 2/3", checks)


def test_criterion_03_rho3_and_rho1():
    beta = math.pi / 3
    tmap = rotation_map(math.pi / 2, beta)
    verdict(
        3,
        "rho3 and rho1 at beta=pi/3, delta=pi/2",
        [
            close("rho3", measurement_fidelity("rho3", tmap, beta=beta), 0.58333, 1e-4),
            close("rho1", measurement_fidelity("rho1", tmap), 0.6111, 1e-4),
        ],
    )


def test_criterion_04_functional_closed_forms():
    checks = []
    for beta in (0.0, 0.7, math.pi / 3, 2.2, math.pi):
        f = extract_functional(rotation_map(math.pi / 2, beta))
        err = np.max(np.abs(f.as_array() - [1 / 3, 1 / 6, 1 / 6, math.cos(beta) / 6, 0.0]))
        checks.append(close(f"rotation beta={beta:.3g} max err", err, 0.0, 1e-8))
    f = extract_functional(orthog_map(math.pi / 2))
    err = np.max(np.abs(f.as_array() - [2 / 3, -1 / 6, -1 / 6, -1 / 6, 0.0]))
    checks.append(close("orthog max err", err, 0.0, 1e-8))
    for alpha in np.linspace(0.0, math.pi, 7):
        f = extract_functional(general_map(math.pi, alpha))
        c, s = math.cos(alpha) / 6, math.sin(alpha)
        checks.append(close(f"general alpha={alpha:.3g} V", f.V, 0.5 - c, 1e-8))
        checks.append(close(f"general alpha={alpha:.3g} W", abs(f.W - c), 0.0, 1e-8))
        checks.append(close(f"general alpha={alpha:.3g} X", f.X, c + 0.3926 * s, 1e-3))
        checks.append(close(f"general alpha={alpha:.3g} Y", f.Y, c - 0.3926 * s, 1e-3))
    half = extract_functional(general_map(math.pi, math.pi / 2))
    checks.append(close("(X - Y)/2 at alpha=pi/2", (half.X - half.Y) / 2, math.pi / 8, 1e-3))
    for delta in np.linspace(0.0, math.pi / 2, 7):
        f = extract_functional(rotation_map(delta, math.pi / 3))
        t = 0.1623 * math.cos(delta) - 0.018 * math.cos(3 * delta)
        checks.append(close(f"W(delta={delta:.3g}) imag", -f.W.imag, t, 2e-3))
        checks.append(close(f"W(delta={delta:.3g}) real", f.W.real, 1 / 12, 2e-3))
    verdict(4, "extracted functionals match closed forms", checks)


def test_criterion_05_rotation_optimum():
    checks = []
    for beta in np.linspace(0.0, math.pi, 25):
        v = maximize(extract_functional(rotation_map(math.pi / 2, beta))).value
        checks.append(close(f"F(beta={beta:.3g})", v, 2 / 3 + abs(math.cos(beta)) / 3, 1e-9))
    for beta, want in ((0.0, 1.0), (math.pi, 1.0), (math.pi / 2, 2 / 3)):
        v = maximize(extract_functional(rotation_map(math.pi / 2, beta))).value
        checks.append(close(f"endpoint F({beta:.3g})", v, want, 1e-9))
    verdict(5, "optimal quantum rotation at delta=pi/2", checks)


def test_criterion_06_chi_endpoints():
    beta = math.pi / 3
    verdict(
        6,
        "chi endpoints for beta=pi/3",
        [
            close("chi(0)", optimal_chi(extract_functional(rotation_map(0.0, beta))), math.pi / 3, 1e-3),
            close("chi(pi/2)", optimal_chi(extract_functional(rotation_map(math.pi / 2, beta))), 0.0, 1e-3),
        ],
    )


def test_criterion_07_orthog_quantum_crossover():
    rep = dict(crossover_report("orthog"))
    loc = rep.get(("identity", "bit_flip"), float("nan"))
    value = maximize(extract_functional(orthog_map(math.pi / 2))).value
    verdict(
        7,
        "ORTHOG quantum crossover and optimal value at pi/2",
        [close("crossover", loc, 0.932197, 1e-3), close("F(pi/2)", value, 2 / 3, 1e-9)],
    )


def test_criterion_08_orthog_measurement_crossover():
    rep = dict(crossover_report("orthog"))
    loc = rep.get(("rho1", "sigma2"), float("nan"))
    verdict(8, "ORTHOG rho1/sigma2 crossover", [close("crossover", loc, 0.82, 2e-2)])


def test_criterion_09_general_switch_points():
    third = [loc for _, loc in crossover_report("general", alpha=math.pi / 3)]
    two_thirds = [loc for _, loc in crossover_report("general", alpha=2 * math.pi / 3)]
    checks = [
        ("count alpha=pi/3", len(third) == 1, f"switches={third}"),
        ("count alpha=2pi/3", len(two_thirds) == 2, f"switches={two_thirds}"),
    ]
    if len(third) == 1:
        checks.append(close("alpha=pi/3", third[0], 0.52, 5e-2))
    if len(two_thirds) == 2:
        checks.append(close("alpha=2pi/3 first", two_thirds[0], 1.05, 5e-2))
        checks.append(close("alpha=2pi/3 second", two_thirds[1], 2.26, 5e-2))
    verdict(9, "general-map measurement switch points", checks)


def test_criterion_10_average_beats_universal():
    checks = []
    for alpha in np.linspace(0.0, 0.70, 15):
        v = maximize(extract_functional(general_map(math.pi, alpha))).value
        checks.append(close(f"F(alpha={alpha:.3g})", v, math.cos(alpha / 2) ** 2, 1e-8))
    gain = maximize(extract_functional(general_map(math.pi, 1.0))).value - math.cos(0.5) ** 2
    checks.append(("gain at alpha=1", gain > 1e-4, f"gain={gain:.6g} (want > 1e-4)"))
    ((_, loc),) = crossover_report("general")
    checks.append(close("departure", loc, 0.7037, 1e-3))
    verdict(10, "average-beats-universal threshold", checks)


def test_criterion_11_property_suites():
    rng = np.random.default_rng(11)
    checks = []

    inputs = BlochAngles(rng.uniform(0, math.pi, 10_000), rng.uniform(0, 2 * math.pi, 10_000))
    channels = random_isometry_channels(rng, 10_000, dim=2)
    bad = 0
    for i, ch in enumerate(channels):
        try:
            check_density(quantum_output(BlochAngles(inputs.theta[i], inputs.phi[i]), ch), tol=1e-10)
        except ValueError:
            bad += 1
    checks.append(("density validity", bad == 0, f"{bad} invalid outputs of 10000"))

    from nonlinear_qubit.channels import dilate

    worst = 0.0
    names = list(SCENARIO_MAPS)
    for k in range(100):
        tmap = SCENARIO_MAPS[names[k % len(names)]]
        g = random_feasible_gram(rng)
        base = dilate(g)
        t, s = rng.uniform(0, 2 * math.pi, 2)
        At = np.zeros(4, dtype=complex)
        At[2] = math.sqrt(1 - g.y) * math.cos(t)
        At[3] = math.sqrt(1 - g.y) * math.sin(t) * np.exp(1j * s)
        other = type(base)(A=base.A, Atilde=At, B=base.B, Btilde=base.Btilde)
        worst = max(worst, abs(channel_fidelity(other, tmap) - channel_fidelity(base, tmap)))
    checks.append(close("Gram-only dependence worst diff", worst, 0.0, 1e-8))

    worst = max(abs(maximize(f).value - brute_force(f).value) for f in (random_functional(rng) for _ in range(100)))
    checks.append(close("maximize vs brute force worst diff", worst, 0.0, 1e-6))

    worst = 0.0
    for tmap in SCENARIO_MAPS.values():
        a = extract_functional(tmap, DEFAULT_QUAD).as_array()
        b = extract_functional(tmap, DEFAULT_QUAD.doubled()).as_array()
        worst = max(worst, float(np.max(np.abs(a - b))))
        for scheme in ("rho1", "rho2", "sigma1", "sigma2"):
            worst = max(worst, abs(measurement_fidelity(scheme, tmap) - measurement_fidelity(scheme, tmap, DEFAULT_QUAD.doubled())))
    rot = rotation_map(math.pi / 2, 1.0)
    worst = max(worst, abs(measurement_fidelity("rho3", rot, beta=1.0) - measurement_fidelity("rho3", rot, DEFAULT_QUAD.doubled(), 1.0)))
    checks.append(close("quadrature doubling worst diff", worst, 0.0, 1e-9))

    margin = math.inf
    for _ in range(50):
        family = str(rng.choice(["rotation", "orthog", "general", "linear_baseline"]))
        delta = rng.uniform(0, math.pi / 2 if family == "orthog" else math.pi)
        schemes = ("rho1", "rho2", "sigma1", "sigma2") + (("rho3",) if family == "rotation" else ()) + ("quantum_optimal",)
        req = ScenarioRequest(family, delta=delta, beta=rng.uniform(0, math.pi), alpha=rng.uniform(0, math.pi), schemes=schemes)
        f = run(req).fidelities
        margin = min(margin, f["quantum_optimal"] - max(v for k, v in f.items() if k != "quantum_optimal"))
    checks.append(("quantum dominates measurement", margin >= -1e-9, f"min margin={margin:.3g}"))
    verdict(11, "property suites", checks)


def test_criterion_12_unot():
    ch = buzek_unot()
    n0, n1, orth = ch.constraint_residuals()
    g = gram_of(ch)
    checks = [
        close("normalisation |A|^2+|B|^2", n0, 0.0, 1e-12),
        close("normalisation |A~|^2+|B~|^2", n1, 0.0, 1e-12),
        close("orthogonality", orth, 0.0, 1e-12),
        close("x", g.x, 1 / 3, 1e-12),
        close("y", g.y, 1 / 3, 1e-12),
        close("z", abs(g.z + 1 / 3), 0.0, 1e-12),
        close("ORTHOG fidelity", channel_fidelity(ch, orthog_map(math.pi / 2)), 2 / 3, 1e-9),
    ]
    verdict(12, "U-NOT ancilla vectors", checks)


if __name__ == "__main__":
    raise SystemExit(pytest.main(["-s", "-q", __file__]))
