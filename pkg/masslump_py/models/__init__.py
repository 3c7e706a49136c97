"""Data models for parameters, analysis records, reports and configuration."""

from .analysis import GapKind, GapPair, PeRow, RootReport, ThresholdKind
from .config import (
    ConvergenceConfig,
    CurvesConfig,
    FemRunConfig,
    OutputFormat,
    PeConfig,
    RootsConfig,
    RunConfig,
    SymbolsConfig,
)
from .params import SchemeParams, SymbolValue
from .reports import ConvergenceMode, ConvergenceRow, ConvergenceTable, ErrorReport, PairGap
from .schemes import SchemeKind, SchemeSelector

__all__ = [
    "SchemeParams",
    "SymbolValue",
    "SchemeKind",
    "SchemeSelector",
    "GapKind",
    "GapPair",
    "ThresholdKind",
    "RootReport",
    "PeRow",
    "ConvergenceMode",
    "ErrorReport",
    "PairGap",
    "ConvergenceRow",
    "ConvergenceTable",
    "OutputFormat",
    "RunConfig",
    "SymbolsConfig",
    "CurvesConfig",
    "RootsConfig",
    "ConvergenceConfig",
    "FemRunConfig",
    "PeConfig",
]
