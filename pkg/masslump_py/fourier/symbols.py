"""Closed-form Fourier symbols of the exact, lumped, consistent and corrected schemes.

A discrete harmonic ``a_k(t) = exp(omega*t) * exp(i*k*h*p)`` on a uniform 1D mesh
is an eigenvector of every scheme; ``omega`` is its symbol. All functions here are
pure and evaluate the printed closed forms in double precision.
"""

import cmath
import logging
import math

from ..exceptions.errors import DomainError
from ..models.params import SchemeParams, SymbolValue
from ..models.schemes import SchemeKind, SchemeSelector

logger = logging.getLogger(__name__)

# Ratio of the Neumann series for 1D linear elements is (2/3)sin^2(ph/2).
CORRECTION_RATIO = 2.0 / 3.0
# Terms beyond this index underflow relative to the sum for |ph| <= pi.
SYMBOL_TERM_CAP = 64


def _symbol(re: float, im: float) -> SymbolValue:
    # + 0.0 folds -0.0 into 0.0
    return SymbolValue(re=re + 0.0, im=im + 0.0)


def _lumped_parts(params: SchemeParams) -> tuple[float, float, float, float]:
    """Return (diffusion scale, convection scale, s, r) with s = sin^2(z/2)."""
    z = params.p * params.h
    s = math.sin(0.5 * z) ** 2
    diffusion = 4.0 * params.kappa / (params.h * params.h) * s
    convection = params.lam / params.h * math.sin(z)
    return diffusion, convection, s, CORRECTION_RATIO * s


def complex_expm1(x: complex) -> complex:
    """Accurate ``exp(x) - 1`` for complex ``x`` near zero."""
    a, b = x.real, x.imag
    sin_half = math.sin(0.5 * b)
    re = math.expm1(a) * math.cos(b) - 2.0 * sin_half * sin_half
    im = math.exp(a) * math.sin(b)
    return complex(re, im)


def exact_symbol(params: SchemeParams) -> SymbolValue:
    """Symbol of the continuous problem: -kappa*p^2 - i*lambda*p."""
    p = params.p
    return _symbol(-params.kappa * p * p, -params.lam * p)


def lumped_symbol(params: SchemeParams) -> SymbolValue:
    """Symbol of the lumped-mass scheme."""
    diffusion, convection, _, _ = _lumped_parts(params)
    return _symbol(-diffusion, -convection)


def consistent_symbol(params: SchemeParams) -> SymbolValue:
    """Symbol of the consistent-mass (Galerkin) scheme."""
    diffusion, convection, _, r = _lumped_parts(params)
    denominator = 1.0 - r
    return _symbol(-diffusion / denominator, -convection / denominator)


def correction_term(m: int, params: SchemeParams) -> tuple[float, float]:
    """Real and imaginary increments (A_m, B_m) removed by the m-th correction.

    Args:
        m: Correction index, at least 1.
        params: Scheme parameters.

    Returns:
        ``(A_m, B_m)`` such that ``omega_m = omega_{m-1} - A_m - i*B_m``.

    Raises:
        DomainError: If ``m < 1``.
    """
    if m < 1:
        raise DomainError(f"correction index must be >= 1, got {m}")
    diffusion, convection, _, r = _lumped_parts(params)
    power = 1.0
    for _ in range(m):
        power *= r
    return diffusion * power, convection * power


def corrected_symbol(n: int, params: SchemeParams) -> SymbolValue:
    """Symbol of the n-th corrected scheme.

    ``n = 0`` returns exactly :func:`lumped_symbol`. Indices above
    ``SYMBOL_TERM_CAP`` are evaluated at the cap.

    Raises:
        DomainError: If ``n < 0``.
    """
    if n < 0:
        raise DomainError(f"number of corrections must be >= 0, got {n}")
    if n > SYMBOL_TERM_CAP:
        logger.debug("corrected_symbol: n=%d capped at %d", n, SYMBOL_TERM_CAP)
        n = SYMBOL_TERM_CAP
    diffusion, convection, _, r = _lumped_parts(params)
    re = -diffusion
    im = -convection
    power = 1.0
    for _ in range(n):
        power *= r
        re -= diffusion * power
        im -= convection * power
    return _symbol(re, im)


def symbol_tail(n: int, params: SchemeParams) -> complex:
    """Return ``omega_G - omega_n`` from the closed geometric tail.

    The tail is ``-(A_{n+1} + i*B_{n+1}) / (1 - r)``, which avoids subtracting
    two nearly equal symbols.
    """
    if n < 0:
        raise DomainError(f"number of corrections must be >= 0, got {n}")
    diffusion, convection, _, r = _lumped_parts(params)
    power = 1.0
    for _ in range(n + 1):
        power *= r
    scale = power / (1.0 - r)
    return complex(-diffusion * scale, -convection * scale)


def _series_index(selector: SchemeSelector) -> int | None:
    if selector.kind is SchemeKind.CONSISTENT:
        return None
    return min(selector.n, SYMBOL_TERM_CAP)


def scheme_symbol(selector: SchemeSelector, params: SchemeParams) -> SymbolValue:
    """Symbol of the scheme named by ``selector``."""
    if selector.kind is SchemeKind.CONSISTENT:
        return consistent_symbol(params)
    return corrected_symbol(selector.n, params)


def symbol_difference(
    first: SchemeSelector, second: SchemeSelector, params: SchemeParams
) -> complex:
    """Return ``omega_first - omega_second`` without cancellation.

    Differences between corrected schemes are summed from the correction terms
    and differences involving the consistent scheme use :func:`symbol_tail`.
    """
    i, j = _series_index(first), _series_index(second)
    if i == j:
        return 0j
    if i is None:
        assert j is not None
        return symbol_tail(j, params)
    if j is None:
        return -symbol_tail(i, params)
    low, high = min(i, j), max(i, j)
    diffusion, convection, _, r = _lumped_parts(params)
    power = 1.0
    for _ in range(low):
        power *= r
    total_re = 0.0
    total_im = 0.0
    for _ in range(low, high):
        power *= r
        total_re += diffusion * power
        total_im += convection * power
    # omega_high - omega_low = -sum of terms low+1..high
    delta = complex(-total_re, -total_im)
    return delta if i > j else -delta


def harmonic_rel_error(
    omega_num: SymbolValue, omega_exact: SymbolValue, t: float
) -> float:
    """Relative max-norm error of a single harmonic at time ``t``.

    Returns ``|exp((omega_num - omega_exact)*t) - 1|``.

    Raises:
        DomainError: If ``t < 0``.
    """
    if t < 0:
        raise DomainError(f"time must be >= 0, got {t}")
    delta = (omega_num.to_complex() - omega_exact.to_complex()) * t
    return abs(complex_expm1(delta))


def harmonic_abs_error(
    omega_num: SymbolValue,
    omega_exact: SymbolValue,
    t: float,
    amplitude: float = 1.0,
) -> float:
    """Absolute max-norm error ``A*|exp(t*omega_num) - exp(t*omega_exact)|``."""
    growth = abs(cmath.exp(omega_exact.to_complex() * t))
    return abs(amplitude) * growth * harmonic_rel_error(omega_num, omega_exact, t)
