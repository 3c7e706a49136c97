"""Gap functions, thresholds, roots and asymptotic rates of the corrected schemes.

The gap functions compare the squared symbol error of consecutive corrections
(``f``) and of a correction against the consistent scheme (``g``). Their sign
decides which scheme is closer to the exact symbol; their first positive root
fixes the mesh size below which one more correction pays off.
"""

import cmath
import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly
from numpy.typing import ArrayLike, NDArray
from scipy import optimize

from ..exceptions.errors import DomainError, InternalMismatchError, NoRootError
from ..models.analysis import GapKind, GapPair, PeRow, RootReport, ThresholdKind
from ..models.params import SchemeParams
from ..models.schemes import SchemeSelector
from .symbols import (
    CORRECTION_RATIO,
    complex_expm1,
    consistent_symbol,
    correction_term,
    corrected_symbol,
    exact_symbol,
    scheme_symbol,
    symbol_difference,
    symbol_tail,
)

logger = logging.getLogger(__name__)

ROOT_SCAN_POINTS = 4096
ROOT_TOLERANCE = 1e-12
# Below this |z| the gap functions are evaluated from their Taylor polynomial.
SERIES_RADIUS = 0.5
SERIES_DEGREE = 16
# pe_asymptotics needs mu^2 above this bound for z0 < psi < 1 < z_star.
PE_MU2_BOUND = 39550.0 / 9963.0
_Z0_DEGENERATE_MU2 = 17.0 / 156.0
_TAYLOR_TERMS = 40

FloatOrArray = float | NDArray[np.float64]

Poly = list[Fraction]


# --------------------------------------------------------------------------- #
# exact rational series in w = z^2


def _mul(a: Poly, b: Poly, degree: int) -> Poly:
    out = [Fraction(0)] * (degree + 1)
    for i, ai in enumerate(a[: degree + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: degree + 1 - i]):
            out[i + j] += ai * bj
    return out


def _lin(degree: int, *terms: tuple[Fraction | int, Poly]) -> Poly:
    out = [Fraction(0)] * (degree + 1)
    for scale, poly in terms:
        for k, value in enumerate(poly[: degree + 1]):
            out[k] += scale * value
    return out


def _constant(value: int, degree: int) -> Poly:
    return [Fraction(value)] + [Fraction(0)] * degree


def _div_w(a: Poly) -> Poly:
    if a[0] != 0:
        raise InternalMismatchError("series has a constant term and cannot be divided by z^2")
    return a[1:] + [Fraction(0)]


def _power(a: Poly, k: int, degree: int) -> Poly:
    out = _constant(1, degree)
    for _ in range(k):
        out = _mul(out, a, degree)
    return out


@lru_cache(maxsize=None)
def _series_coefficients(
    kind: GapKind, n: int
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Ascending coefficients in w = z^2 of the mu-free and mu^2 parts."""
    degree = SERIES_DEGREE + 1
    s = [Fraction(0)] + [
        Fraction((-1) ** (k + 1), 2 * math.factorial(2 * k)) for k in range(1, degree + 1)
    ]
    sigma = [Fraction((-1) ** k, math.factorial(2 * k + 1)) for k in range(degree + 1)]
    r = _lin(degree, (Fraction(2, 3), s))
    r_n1 = _power(r, n + 1, degree)
    r_n2 = _mul(r_n1, r, degree)
    two = _constant(2, degree)
    s_w = _div_w(s)

    if kind.is_consistent:
        inverse = _lin(degree, *[(1, _power(r, j, degree)) for j in range(degree + 1)])
        inner = _div_w(_lin(degree, (8, s), (-6, r_n2)))
        alpha = _mul(
            _lin(degree, (4, s_w)),
            _lin(degree, (1, _mul(inner, inverse, degree)), (-1, two)),
            degree,
        )
        beta = _mul(
            sigma,
            _lin(
                degree,
                (1, _mul(_mul(sigma, _lin(degree, (1, two), (-1, r_n1)), degree), inverse, degree)),
                (-1, two),
            ),
            degree,
        )
    else:
        partial = _lin(degree, *[(1, _power(r, j, degree)) for j in range(n + 2)])
        alpha = _mul(
            _lin(degree, (4, s_w)),
            _lin(
                degree,
                (8, _mul(s_w, partial, degree)),
                (-1, two),
                (-6, _div_w(r_n2)),
            ),
            degree,
        )
        beta = _mul(
            sigma,
            _lin(
                degree,
                (1, _mul(sigma, _lin(degree, (2, partial), (-1, r_n1)), degree)),
                (-1, two),
            ),
            degree,
        )

    # the top coefficient is incomplete after the division by w
    alpha_f = np.array([float(c) for c in alpha[:SERIES_DEGREE + 1]])
    beta_f = np.array([float(c) for c in beta[:SERIES_DEGREE + 1]])
    if kind.is_tilde:
        alpha_f = np.zeros_like(beta_f)
    return alpha_f, beta_f


def series_coefficients(kind: GapKind, n: int, mu: float | None = None) -> NDArray[np.float64]:
    """Taylor coefficients of a gap function in powers of ``z^2``.

    Args:
        kind: Gap function family.
        n: Number of corrections, at least 0.
        mu: Peclet ratio for ``F``/``G``; must be omitted for tilde kinds.

    Returns:
        Coefficients ``[a_0, a_1, ...]`` with ``gap = sum a_k z^(2k)``.
    """
    _check_gap_args(kind, n, mu)
    alpha, beta = _series_coefficients(kind, n)
    if kind.is_tilde:
        return beta.copy()
    assert mu is not None
    return alpha + mu * mu * beta


# --------------------------------------------------------------------------- #
# gap functions


def _check_gap_args(kind: GapKind, n: int, mu: float | None) -> None:
    if n < 0:
        raise DomainError(f"number of corrections must be >= 0, got {n}")
    if kind.is_tilde and mu is not None:
        raise DomainError(f"{kind.value} takes no mu")
    if not kind.is_tilde and mu is None:
        raise DomainError(f"{kind.value} requires mu")


def _closed_form(kind: GapKind, n: int, z: NDArray[np.float64], mu2: float) -> NDArray[np.float64]:
    s = np.sin(0.5 * z) ** 2
    r = CORRECTION_RATIO * s
    sigma = np.sin(z) / z
    r_n1 = r ** (n + 1)
    r_n2 = r_n1 * r
    z2 = z * z
    if kind.is_consistent:
        inverse = 1.0 / (1.0 - r)
        beta = sigma * (sigma * (2.0 - r_n1) * inverse - 2.0)
        alpha = (4.0 * s / z2) * ((8.0 * s - 6.0 * r_n2) / z2 * inverse - 2.0)
    else:
        partial = (1.0 - r_n2) / (1.0 - r)
        beta = sigma * (sigma * (2.0 * partial - r_n1) - 2.0)
        alpha = (4.0 * s / z2) * (8.0 * s / z2 * partial - 2.0 - 6.0 * r_n2 / z2)
    if kind.is_tilde:
        return beta
    return alpha + mu2 * beta


def gap_function(
    kind: GapKind, n: int, z: ArrayLike, mu: float | None = None
) -> FloatOrArray:
    """Evaluate ``f_n``, ``g_n``, ``f~_n`` or ``g~_n`` at ``z = p*h``.

    Values at ``z = 0`` are 0 by continuity. For ``|z| <= SERIES_RADIUS`` the
    exact Taylor polynomial is used instead of the closed form.

    Args:
        kind: Gap function family.
        n: Number of corrections, at least 0.
        z: Scalar or array of dimensionless wave numbers.
        mu: ``lambda/(kappa*p)`` for ``F``/``G``; omitted for tilde kinds.

    Returns:
        A float for scalar ``z``, otherwise an array of the same shape.

    Raises:
        DomainError: If ``mu`` is missing for ``F``/``G`` or given for tilde kinds.
    """
    _check_gap_args(kind, n, mu)
    mu2 = 0.0 if mu is None else mu * mu
    zs = np.asarray(z, dtype=np.float64)
    scalar = zs.ndim == 0
    zs = np.atleast_1d(zs)
    out = np.empty_like(zs)

    near = np.abs(zs) <= SERIES_RADIUS
    if near.any():
        out[near] = npoly.polyval(zs[near] ** 2, series_coefficients(kind, n, mu))
    far = ~near
    if far.any():
        out[far] = _closed_form(kind, n, zs[far], mu2)
    if scalar:
        return float(out[0])
    return out


def gap_prefactor(pair: GapPair, n: int, params: SchemeParams) -> float:
    """Positive factor multiplying the gap function in the symbol gap.

    ``N1_VS_N`` gives ``kappa^2 p^4 r^(n+1)`` (``lambda^2 p^2 r^(n+1)`` when
    ``kappa = 0``) and ``G_VS_N`` divides that by ``1 - r``, with
    ``r = (2/3)sin^2(z/2)``.

    Raises:
        DomainError: For ``G_DIST_N``, which has no gap-function form.
    """
    if pair is GapPair.G_DIST_N:
        raise DomainError("g_dist_n has no gap-function factorization")
    if n < 0:
        raise DomainError(f"number of corrections must be >= 0, got {n}")
    r = CORRECTION_RATIO * math.sin(0.5 * params.z) ** 2
    power = r ** (n + 1)
    p2 = params.p * params.p
    if params.is_pure_transport:
        scale = params.lam * params.lam * p2
    else:
        scale = params.kappa * params.kappa * p2 * p2
    factor = scale * power
    if pair is GapPair.G_VS_N:
        factor /= 1.0 - r
    return factor


def _pair_kind(pair: GapPair, params: SchemeParams) -> GapKind:
    if params.is_pure_transport:
        return GapKind.G_TILDE if pair is GapPair.G_VS_N else GapKind.F_TILDE
    return GapKind.G if pair is GapPair.G_VS_N else GapKind.F


# --------------------------------------------------------------------------- #
# thresholds and Taylor coefficients


def threshold(kind: ThresholdKind, mu: float) -> float:
    """Closed-form thresholds in ``z`` as functions of ``mu``.

    ``Z0`` is the smallest positive root of the quartic lower bound of ``f_1``,
    ``Z_STAR = sqrt(c_4/c_5)`` bounds the region where that bound holds and
    ``PSI`` is the smallest positive root of the sextic upper bound.
    """
    mu2 = mu * mu
    if kind is ThresholdKind.Z0:
        if math.isclose(mu2, _Z0_DEGENERATE_MU2, rel_tol=1e-12):
            return 6.0 * math.sqrt(130.0 / 1133.0)
        root_q = math.sqrt(9604.0 * mu2 * mu2 - 4004.0 * mu2 + 10661.0)
        return math.sqrt(840.0 / (98.0 * mu2 + 91.0 + root_q))
    if kind is ThresholdKind.Z_STAR:
        return 6.0 * math.sqrt(33.0 * (80.0 + 79.0 * mu2)) / math.sqrt(13399.0 + 30146.0 * mu2)
    b = 5880.0 * mu2 + 5460.0
    disc = b * b - 50400.0 * (1797.0 * mu2 + 70.0)
    return math.sqrt(50400.0 / (b + math.sqrt(disc)))


@lru_cache(maxsize=None)
def _taylor_parts(m: int) -> tuple[float, float]:
    f0 = Fraction(
        172 * 2 ** (2 * m + 4) - 20 * 3 ** (2 * m + 4) + 4 ** (2 * m + 4) - 524,
        18 * math.factorial(2 * m + 4),
    ) - Fraction(4, math.factorial(2 * m + 2))
    f1 = Fraction(
        4 * (1 - 3 ** (2 * m + 2)) + 25 * 2 ** (2 * m + 2) + 4 ** (2 * m + 1),
        18 * math.factorial(2 * m + 2),
    ) - Fraction(4 * (m + 1), math.factorial(2 * m + 2))
    return float(f0), float(f1)


def taylor_coefficient(m: int, mu: float) -> float:
    """Coefficient ``c_m`` of the alternating tail of ``f_1``.

    ``f_1(z) = P_1(z) + sum_{m>=4} (-1)^m c_m z^(2m)``. Evaluated in exact
    rational arithmetic, so any ``m`` is safe.

    Raises:
        DomainError: If ``m < 4``.
    """
    if m < 4:
        raise DomainError(f"taylor coefficient index must be >= 4, got {m}")
    f0, f1 = _taylor_parts(m)
    return f0 + mu * mu * f1


def bound_polynomials(
    z: ArrayLike, mu: float
) -> tuple[FloatOrArray, FloatOrArray, FloatOrArray]:
    """Return ``(P_1, P_2, P~_2)`` bracketing ``f_1``.

    ``P_1 < f_1 < P_2`` on ``(0, z_star)`` and ``P_2 <= P~_2`` for ``|z| <= 1``;
    the smallest positive roots of ``P_1`` and ``P~_2`` are ``z0`` and ``psi``.
    """
    zs = np.asarray(z, dtype=np.float64)
    mu2 = mu * mu
    w = zs * zs
    p1 = w * (5040.0 - 12.0 * w * (98.0 * mu2 + 91.0) + w * w * (156.0 * mu2 - 17.0)) / 30240.0
    c4 = (79.0 * mu2 + 80.0) / 100800.0
    p2 = p1 + c4 * w**4
    p2_tilde = p1 + c4 * w**3
    if zs.ndim == 0:
        return float(p1), float(p2), float(p2_tilde)
    return p1, p2, p2_tilde


def z0_sweep(mu_values: Sequence[float] | NDArray[np.float64]) -> NDArray[np.float64]:
    """Evaluate ``z0`` over a range of ``mu``."""
    return np.array([threshold(ThresholdKind.Z0, float(mu)) for mu in mu_values])


# --------------------------------------------------------------------------- #
# roots


def smallest_positive_root(
    kind: GapKind,
    n: int,
    mu: float | None,
    z_max: float = math.pi,
    tol: float = ROOT_TOLERANCE,
) -> RootReport:
    """Locate the first plus-to-minus sign change of a gap function.

    Scans ``(0, z_max]`` on ``ROOT_SCAN_POINTS`` uniform samples and bisects
    the first bracketing cell down to ``tol``.

    Raises:
        DomainError: If ``z_max`` is outside ``(0, pi]`` or ``tol <= 0``.
        NoRootError: If the function never changes sign from plus to minus.
    """
    if not 0.0 < z_max <= math.pi + 1e-12:
        raise DomainError(f"z_max must lie in (0, pi], got {z_max}")
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    _check_gap_args(kind, n, mu)

    grid = z_max * np.arange(1, ROOT_SCAN_POINTS + 1) / ROOT_SCAN_POINTS
    values = np.asarray(gap_function(kind, n, grid, mu))
    crossings = np.flatnonzero((values[:-1] > 0.0) & (values[1:] <= 0.0))
    if crossings.size == 0:
        raise NoRootError(f"{kind.value}_{n} has no plus-to-minus sign change on (0, {z_max:g}]")
    k = int(crossings[0])
    a, b = float(grid[k]), float(grid[k + 1])
    logger.debug("%s_%d: scan bracket [%.6g, %.6g]", kind.value, n, a, b)

    if values[k + 1] == 0.0:
        return RootReport(root=b, bracket=(a, b), residual=0.0, scan_bracket=(a, b))

    def func(x: float) -> float:
        return float(gap_function(kind, n, x, mu))

    root, info = optimize.bisect(func, a, b, xtol=tol, full_output=True)
    logger.debug("%s_%d: bisection converged in %d iterations", kind.value, n, info.iterations)
    low, high = max(a, root - tol), min(b, root + tol)
    if not (func(low) > 0.0 and func(high) <= 0.0):
        low, high = a, b
    return RootReport(
        root=float(root),
        bracket=(low, high),
        residual=func(root),
        scan_bracket=(a, b),
    )


def node_threshold(root: float, length: float, p: float) -> int:
    """Smallest node count ``N`` with ``(length/(N - 1))*|p| < root``."""
    if root <= 0.0 or length <= 0.0 or p == 0.0:
        raise DomainError("root, length and p must be positive (p nonzero)")
    return math.floor(length * abs(p) / root) + 2


# --------------------------------------------------------------------------- #
# symbol gaps


def symbol_gap(pair: GapPair, n: int, params: SchemeParams) -> float:
    """Difference of squared symbol distances for one scheme pair.

    * ``N1_VS_N``: ``|w_{n+1} - w|^2 - |w_n - w|^2``
    * ``G_VS_N``: ``|w_G - w|^2 - |w_n - w|^2``
    * ``G_DIST_N``: ``|w_G - w_{n+1}|^2 - |w_G - w_n|^2``

    where ``w`` is the exact symbol. The factored value is returned; when
    assertions are enabled it is checked against the direct difference.

    Raises:
        DomainError: If ``n < 0``.
        InternalMismatchError: If the direct and factored forms disagree.
    """
    if n < 0:
        raise DomainError(f"number of corrections must be >= 0, got {n}")
    if params.p == 0.0:
        return 0.0

    if pair is GapPair.G_DIST_N:
        a_next, b_next = correction_term(n + 1, params)
        tail = symbol_tail(n + 1, params)
        factored = -(
            a_next * a_next
            + b_next * b_next
            - 2.0 * a_next * tail.real
            - 2.0 * b_next * tail.imag
        )
    else:
        kind = _pair_kind(pair, params)
        mu = None if kind.is_tilde else params.mu
        factored = gap_prefactor(pair, n, params) * float(gap_function(kind, n, params.z, mu))

    if __debug__:
        _cross_check(pair, n, params, factored)
    return factored


def _cross_check(pair: GapPair, n: int, params: SchemeParams, factored: float) -> None:
    current = corrected_symbol(n, params).to_complex()
    if pair is GapPair.G_DIST_N:
        anchor = consistent_symbol(params).to_complex()
        candidate = corrected_symbol(n + 1, params).to_complex()
    else:
        anchor = exact_symbol(params).to_complex()
        if pair is GapPair.N1_VS_N:
            candidate = corrected_symbol(n + 1, params).to_complex()
        else:
            candidate = consistent_symbol(params).to_complex()
    first = abs(candidate - anchor) ** 2
    second = abs(current - anchor) ** 2
    direct = first - second
    tolerance = max(1e-12, 1e-10 * max(first, second))
    if abs(direct - factored) > tolerance:
        raise InternalMismatchError(
            f"{pair.value} n={n}: direct {direct!r} vs factored {factored!r}"
        )


def leading_asymptote(
    pair: GapPair, n: int, params: SchemeParams, t: float | None = None
) -> float:
    """Leading term of a gap as ``h -> 0``.

    With ``t`` omitted this is the leading term of :func:`symbol_gap`; with
    ``t`` it is the leading term of :func:`harmonic_error_gap`.

    Raises:
        DomainError: If ``n < 1`` or the pair is ``G_DIST_N``.
    """
    if n < 1:
        raise DomainError(f"number of corrections must be >= 1, got {n}")
    if pair is GapPair.G_DIST_N:
        raise DomainError("no leading asymptote for g_dist_n")
    p, h = abs(params.p), params.h
    if params.is_pure_transport:
        a_n = 7.0 / 6480.0 if n == 1 else 1.0 / (15.0 * 6.0 ** (n + 2))
        value = -(params.lam**2) * p ** (2 * n + 8) * a_n * h ** (2 * n + 6)
        if t is not None:
            value *= t * t
        return value
    value = params.kappa**2 * p ** (2 * n + 8) * h ** (2 * n + 4) / 6.0 ** (n + 2)
    if t is not None:
        value *= math.exp(-2.0 * params.kappa * p * p * t) * t * t
    return value


def _harmonic_gap_parts(
    first: SchemeSelector, second: SchemeSelector, params: SchemeParams, t: float
) -> tuple[float, complex, complex]:
    """Return the relative squared gap and both relative errors ``e^{b} - 1``."""
    exact = exact_symbol(params).to_complex()
    b = t * (scheme_symbol(second, params).to_complex() - exact)
    a = t * symbol_difference(first, second, params)
    err_second = complex_expm1(b)
    increment = cmath.exp(b) * complex_expm1(a)
    rel_gap = abs(increment) ** 2 + 2.0 * (err_second.conjugate() * increment).real
    return rel_gap, err_second + increment, err_second


def harmonic_gap(
    first: SchemeSelector, second: SchemeSelector, params: SchemeParams, t: float
) -> float:
    """``|e^{t w_first} - e^{t w}|^2 - |e^{t w_second} - e^{t w}|^2`` for a unit harmonic."""
    rel_gap, _, _ = _harmonic_gap_parts(first, second, params, t)
    return math.exp(2.0 * exact_symbol(params).re * t) * rel_gap


def harmonic_rel_difference(
    first: SchemeSelector, second: SchemeSelector, params: SchemeParams, t: float
) -> float:
    """Difference of the relative max-norm errors of two schemes."""
    rel_gap, err_first, err_second = _harmonic_gap_parts(first, second, params, t)
    total = abs(err_first) + abs(err_second)
    if total == 0.0:
        return 0.0
    return rel_gap / total


def harmonic_error_gap(pair: GapPair, n: int, params: SchemeParams, t: float) -> float:
    """Gap of squared max-norm errors of the harmonic solutions at time ``t``.

    Raises:
        DomainError: If ``t <= 0``, ``p = 0``, ``n < 1`` or the pair is ``G_DIST_N``.
    """
    if t <= 0.0:
        raise DomainError(f"time must be positive, got {t}")
    if params.p == 0.0:
        raise DomainError("wave number must be nonzero")
    if n < 1:
        raise DomainError(f"number of corrections must be >= 1, got {n}")
    if pair is GapPair.G_DIST_N:
        raise DomainError("harmonic_error_gap compares against the exact solution")
    second = SchemeSelector.corrected(n)
    first = (
        SchemeSelector.corrected(n + 1) if pair is GapPair.N1_VS_N else SchemeSelector.consistent()
    )
    return harmonic_gap(first, second, params, t)


# --------------------------------------------------------------------------- #
# Peclet asymptotics


def _f1_tail(w: float, mu: float) -> float:
    """``sum_{m>=4} (-1)^m c_m w^m`` for small ``w``."""
    total = 0.0
    power = w**3
    for m in range(4, _TAYLOR_TERMS + 1):
        power *= w
        term = taylor_coefficient(m, mu) * power
        total += term if m % 2 == 0 else -term
        if abs(term) <= 1e-18 * abs(total):
            break
    return total


def _z_tilde_offset(mu: float, w0: float, w_psi: float) -> float:
    """Offset ``w~ - w0`` of the first root of ``f_1`` in ``w = z^2``.

    ``P_1`` vanishes at ``w0``, so ``f_1(w0 + e)`` is expanded around it and no
    leading terms cancel.
    """
    mu2 = mu * mu
    a = 156.0 * mu2 - 17.0
    b = 12.0 * (98.0 * mu2 + 91.0)
    slope = 2.0 * a * w0 - b

    def shifted(e: float) -> float:
        return (w0 + e) * (slope * e + a * e * e) / 30240.0 + _f1_tail(w0 + e, mu)

    upper = w_psi - w0
    if not (shifted(0.0) > 0.0 and shifted(upper) < 0.0):
        raise InternalMismatchError(f"f_1 does not change sign between z0 and psi at mu={mu}")
    return float(optimize.bisect(shifted, 0.0, upper, xtol=upper * 1e-15))


def pe_asymptotics(p: float, pe_values: Sequence[float]) -> list[PeRow]:
    """Tabulate ``z0``, ``z~`` and ``psi`` against the Peclet number.

    Args:
        p: Wave number, nonzero.
        pe_values: Strictly increasing Peclet numbers with ``(Pe/p)^2`` above
            ``PE_MU2_BOUND``.

    Returns:
        One :class:`PeRow` per Peclet number.

    Raises:
        DomainError: If ``p = 0``, the values are not increasing or a value is
            below the admissible bound.
    """
    if p == 0.0:
        raise DomainError("wave number must be nonzero")
    if any(b <= a for a, b in zip(pe_values, pe_values[1:], strict=False)):
        raise DomainError("Peclet numbers must be strictly increasing")

    scale = abs(p)
    rows = []
    for pe in pe_values:
        mu = pe / scale
        if mu * mu <= PE_MU2_BOUND:
            raise DomainError(
                f"Pe={pe:g} gives mu^2={mu * mu:.6g}, need mu^2 > {PE_MU2_BOUND:.6g}"
            )
        z0 = threshold(ThresholdKind.Z0, mu)
        psi = threshold(ThresholdKind.PSI, mu)
        w0, w_psi = z0 * z0, psi * psi
        offset = _z_tilde_offset(mu, w0, w_psi)
        z_tilde = math.sqrt(w0 + offset)
        gap = offset / (z_tilde + z0)
        psi_gap = (w_psi - w0) / (psi + z0)
        cube = (pe / scale) ** 3
        rows.append(
            PeRow(
                pe=pe,
                z0=z0,
                z_tilde=z_tilde,
                psi=psi,
                z0_scaled=z0 * pe / scale,
                gap_scaled=gap * cube,
                psi_gap_scaled=psi_gap * cube,
            )
        )
        logger.debug("Pe=%g: z0=%.12g z_tilde-z0=%.6g psi=%.12g", pe, z0, gap, psi)
    return rows


# --------------------------------------------------------------------------- #
# curve sampling


def sample_curves(
    mu: float | None,
    n_max: int,
    z_max: float = math.pi,
    samples: int = 400,
    pure: bool = False,
) -> dict[str, NDArray[np.float64]]:
    """Sample ``f_1..f_n`` and ``g_1..g_n`` (or their tilde forms) on ``(0, z_max]``.

    Returns:
        Columns keyed ``z``, ``f_1``..., ``g_1``... (``ft_``/``gt_`` when ``pure``).
    """
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    if samples < 2:
        raise DomainError(f"need at least 2 samples, got {samples}")
    if not 0.0 < z_max <= math.pi + 1e-12:
        raise DomainError(f"z_max must lie in (0, pi], got {z_max}")
    z = z_max * np.arange(1, samples + 1) / samples
    columns: dict[str, NDArray[np.float64]] = {"z": z}
    if pure:
        kinds, prefixes, mu_arg = (GapKind.F_TILDE, GapKind.G_TILDE), ("ft", "gt"), None
    else:
        if mu is None:
            raise DomainError("mu is required unless pure transport curves are requested")
        kinds, prefixes, mu_arg = (GapKind.F, GapKind.G), ("f", "g"), mu
    for kind, prefix in zip(kinds, prefixes, strict=True):
        for n in range(1, n_max + 1):
            columns[f"{prefix}_{n}"] = np.asarray(gap_function(kind, n, z, mu_arg))
    return columns
