"""Numerical checks of integral-mean inequalities for harmonic quasiregular maps of the disk."""

from .core import (
    CircleSamples,
    CoefficientSeries,
    HarmonicMap,
    QuasiregularityEstimate,
    dilatation_samples,
    eval_analytic,
    eval_harmonic,
    estimate_quasiregularity,
)
from .errors import DegenerateDilatation, HqrError, HypothesisViolated, NonpositiveU, ZeroModulus
from .means import RadialProfile, integral_mean, m2_exact, radial_profile, zygmund_functional
from .probe import ProbeResult, grid_sweep, refine_max, run_probe
from .report import InequalityReport
from .suite import run_suite
from .zoo import FAMILIES, ZooMember, build

__all__ = [
    "CircleSamples", "CoefficientSeries", "HarmonicMap", "QuasiregularityEstimate",
    "dilatation_samples", "eval_analytic", "eval_harmonic", "estimate_quasiregularity",
    "DegenerateDilatation", "HqrError", "HypothesisViolated", "NonpositiveU", "ZeroModulus",
    "RadialProfile", "integral_mean", "m2_exact", "radial_profile", "zygmund_functional",
    "ProbeResult", "grid_sweep", "refine_max", "run_probe",
    "InequalityReport", "run_suite", "FAMILIES", "ZooMember", "build",
]
