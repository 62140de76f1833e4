"""Optimal average fidelities for nonlinear single-qubit transformations."""

from .bloch import BlochAngles, density_of, fidelity, orthogonal_state, rotate_phase, state_from_angles
from .channels import AncillaVectors, GramParams, buzek_unot, dilate, gram_of, quantum_output
from .integrate import (
    FidelityFunctional,
    QuadratureSpec,
    TargetMap,
    extract_functional,
    general_coefficients,
    measurement_fidelity,
    orthog_coefficients,
    sphere_average,
)
from .optimize import Optimum, brute_force, find_crossover, maximize, optimal_chi
from .scenarios import CurvePoint, ScenarioRequest, crossover_report, run, sweep

__version__ = "0.1.0"
