"""Exact solutions, error norms and the convergence / FEM experiment drivers."""

from .async_runner import AsyncExperimentRunner
from .exact import (
    ConvDiff2D,
    ConvDiff3D,
    Decay3D,
    ExactSolution,
    Harmonic1D,
    Transport2D,
    Transport3D,
    exact_eval,
)
from .norms import EXCLUSION_THRESHOLD, empirical_order, error_norms, error_norms_from_values
from .presets import EXAMPLES, PRESETS, Preset, PresetKind, get_example, get_preset
from .runners import (
    DIFFUSIVE_PAIRS,
    TRANSPORT_PAIRS,
    consistent_proximity,
    default_pairs,
    run_convergence_1d,
    run_fem,
)

__all__ = [
    "ExactSolution",
    "Harmonic1D",
    "ConvDiff2D",
    "Transport2D",
    "ConvDiff3D",
    "Decay3D",
    "Transport3D",
    "exact_eval",
    "EXCLUSION_THRESHOLD",
    "error_norms",
    "error_norms_from_values",
    "empirical_order",
    "DIFFUSIVE_PAIRS",
    "TRANSPORT_PAIRS",
    "default_pairs",
    "run_convergence_1d",
    "run_fem",
    "consistent_proximity",
    "AsyncExperimentRunner",
    "EXAMPLES",
    "PRESETS",
    "Preset",
    "PresetKind",
    "get_example",
    "get_preset",
]
