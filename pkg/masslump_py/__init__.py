"""masslump-py

Neumann-series correction of lumped P1 mass matrices, with exact Fourier-symbol
analysis of the corrected schemes and convergence experiments that compare them.
"""

__version__ = "0.1.0"

from .exceptions.errors import DomainError, MassLumpError, ValidationError
from .experiments.async_runner import AsyncExperimentRunner
from .experiments.runners import run_convergence_1d, run_fem
from .fem.assembly import assemble_system, correction_apply
from .fem.integrate import SemiDiscreteSystem, StateVector, evolve
from .fem.mesh import Mesh1DPeriodic, SimplicialMesh, structured_simplicial, uniform_1d_periodic
from .fourier.dispersion import gap_function, smallest_positive_root, symbol_gap, threshold
from .fourier.symbols import corrected_symbol, exact_symbol, scheme_symbol
from .models.params import SchemeParams, SymbolValue
from .models.schemes import SchemeKind, SchemeSelector

__all__ = [
    "SchemeParams",
    "SymbolValue",
    "SchemeKind",
    "SchemeSelector",
    "exact_symbol",
    "corrected_symbol",
    "scheme_symbol",
    "gap_function",
    "symbol_gap",
    "threshold",
    "smallest_positive_root",
    "Mesh1DPeriodic",
    "SimplicialMesh",
    "uniform_1d_periodic",
    "structured_simplicial",
    "assemble_system",
    "correction_apply",
    "SemiDiscreteSystem",
    "StateVector",
    "evolve",
    "run_convergence_1d",
    "run_fem",
    "AsyncExperimentRunner",
    "MassLumpError",
    "ValidationError",
    "DomainError",
]
