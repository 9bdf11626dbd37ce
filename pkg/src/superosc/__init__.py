"""Superoscillatory bandlimited signals: synthesis, certification and analysis."""

from .additive import (
    ConstraintMatrix,
    ConstraintSet,
    SolveReport,
    build_matrix,
    generate_generic,
    generate_minnorm,
    orthogonality_check,
    solve_constraints,
)
from .bases import BasisFamily, make_basis, register_basis
from .experiments import capacity_consistency, dynamic_range, scaling_experiment, shannon_hartley
from .multiplicative import ZeroSpec, generate_multiplicative, superoscillation_region_model
from .oscillator import OscillatorConfig, absorption_sweep, simulate, timescale_estimate
from .signals import (
    BasisSum,
    HarmonicSum,
    ProductSignal,
    SincSeries,
    Spectrum,
    declared_bandwidth,
    evaluate,
    expand_product,
    l2_norm_on,
    numeric_spectrum,
    sup_norm_on,
)
from .spectral import antisymmetry_report, local_frequency

__all__ = [
    "BasisFamily", "BasisSum", "ConstraintMatrix", "ConstraintSet", "HarmonicSum", "OscillatorConfig",
    "ProductSignal", "SincSeries", "SolveReport", "Spectrum", "ZeroSpec", "absorption_sweep",
    "antisymmetry_report", "build_matrix", "capacity_consistency", "declared_bandwidth", "dynamic_range",
    "evaluate", "expand_product", "generate_generic", "generate_minnorm", "generate_multiplicative",
    "l2_norm_on", "local_frequency", "make_basis", "numeric_spectrum", "orthogonality_check",
    "register_basis", "scaling_experiment", "shannon_hartley", "simulate", "solve_constraints",
    "sup_norm_on", "superoscillation_region_model", "timescale_estimate",
]
