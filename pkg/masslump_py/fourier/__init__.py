"""Fourier analysis of the lumped, corrected and consistent schemes."""

from .dispersion import (
    bound_polynomials,
    gap_function,
    gap_prefactor,
    harmonic_error_gap,
    harmonic_gap,
    harmonic_rel_difference,
    leading_asymptote,
    node_threshold,
    pe_asymptotics,
    sample_curves,
    series_coefficients,
    smallest_positive_root,
    symbol_gap,
    taylor_coefficient,
    threshold,
    z0_sweep,
)
from .symbols import (
    complex_expm1,
    consistent_symbol,
    corrected_symbol,
    correction_term,
    exact_symbol,
    harmonic_abs_error,
    harmonic_rel_error,
    lumped_symbol,
    scheme_symbol,
    symbol_difference,
    symbol_tail,
)

__all__ = [
    "exact_symbol",
    "lumped_symbol",
    "consistent_symbol",
    "corrected_symbol",
    "correction_term",
    "scheme_symbol",
    "symbol_tail",
    "symbol_difference",
    "complex_expm1",
    "harmonic_rel_error",
    "harmonic_abs_error",
    "gap_function",
    "series_coefficients",
    "gap_prefactor",
    "threshold",
    "taylor_coefficient",
    "bound_polynomials",
    "z0_sweep",
    "smallest_positive_root",
    "node_threshold",
    "symbol_gap",
    "leading_asymptote",
    "harmonic_gap",
    "harmonic_rel_difference",
    "harmonic_error_gap",
    "pe_asymptotics",
    "sample_curves",
]
