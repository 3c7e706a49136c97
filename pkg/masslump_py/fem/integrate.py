"""Semi-discrete right-hand sides and explicit RK4 time stepping.

Only the unknown (non-Dirichlet) nodes are integrated. With interior nodes ``I``
and boundary nodes ``B`` the load is

    G_I(t) = -(K + s(t) C)_{I,:} a(t) - M_IB du_B/dt

where ``a`` holds the state on ``I`` and the exact boundary values on ``B``.
Every scheme then approximates ``M_II da_I/dt = G_I``: the lumped scheme uses
the row sums of ``M_II``, the corrected schemes apply the truncated Neumann
series and the consistent scheme solves with ``M_II``.
"""

import cmath
import logging
import math
from collections.abc import Callable, Iterator
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray
from scipy import sparse
from scipy.sparse import linalg as splinalg

from ..exceptions.errors import DomainError, NonFiniteError, SolveFailureError
from ..fourier.symbols import exact_symbol, harmonic_abs_error, harmonic_rel_error, scheme_symbol
from ..models.params import SchemeParams
from ..models.schemes import SchemeKind, SchemeSelector
from .assembly import FemMatrices, LumpedMass, SparseMatrix, correction_apply, correction_bound, lump
from .mesh import Mesh1DPeriodic

logger = logging.getLogger(__name__)

MASS_SOLVE_TOLERANCE = 1e-13
MASS_SOLVE_ITERATION_FACTOR = 10
RK4_STABILITY_RADIUS = 2.8
TIME_STEP_SAFETY = 0.8
RICHARDSON_FACTOR = 1e-3
MAX_STEP_HALVINGS = 30

TimeFunction = Callable[[float], NDArray[np.float64]]
RightHandSide = Callable[[float, NDArray], NDArray]

__all__ = [
    "SchemeKind",
    "SchemeSelector",
    "StateVector",
    "SemiDiscreteSystem",
    "rhs",
    "solve_mass",
    "rk4_step",
    "iter_steps",
    "evolve",
    "evolve_symbol_exact",
    "stability_time_step",
    "select_time_step",
    "harmonic_state",
]


@dataclass(frozen=True)
class StateVector:
    """Values on the unknown nodes at time ``t``."""

    values: NDArray
    t: float


@dataclass(frozen=True)
class SemiDiscreteSystem:
    """Interior-block semi-discrete system ready for time stepping.

    Use :meth:`periodic` for 1D periodic meshes and :meth:`dirichlet` for
    simplicial meshes with exact boundary data.
    """

    dim: int
    mass: SparseMatrix
    lumped: LumpedMass
    diffusion: SparseMatrix
    convection: SparseMatrix
    interior: NDArray[np.int64]
    boundary: NDArray[np.int64] = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    mass_boundary: SparseMatrix | None = None
    boundary_values: TimeFunction | None = None
    boundary_rates: TimeFunction | None = None
    convection_scale: Callable[[float], float] | None = None
    n_total: int = 0

    @classmethod
    def periodic(
        cls, matrices: FemMatrices, convection_scale: Callable[[float], float] | None = None
    ) -> "SemiDiscreteSystem":
        """System on a periodic 1D mesh: every node is unknown."""
        n = matrices.size
        return cls(
            dim=1,
            mass=matrices.mass,
            lumped=matrices.lumped,
            diffusion=matrices.diffusion,
            convection=matrices.convection,
            interior=np.arange(n),
            convection_scale=convection_scale,
            n_total=n,
        )

    @classmethod
    def dirichlet(
        cls,
        matrices: FemMatrices,
        dim: int,
        interior: NDArray[np.int64],
        boundary: NDArray[np.int64],
        boundary_values: TimeFunction,
        boundary_rates: TimeFunction,
        convection_scale: Callable[[float], float] | None = None,
    ) -> "SemiDiscreteSystem":
        """System with exact Dirichlet data on ``boundary``."""
        if interior.size == 0:
            raise DomainError("mesh has no interior nodes")
        mass_ii = restrict(matrices.mass, interior, interior)
        return cls(
            dim=dim,
            mass=mass_ii,
            lumped=lump(mass_ii),
            diffusion=matrices.diffusion.tocsr()[interior],
            convection=matrices.convection.tocsr()[interior],
            interior=interior,
            boundary=boundary,
            mass_boundary=restrict(matrices.mass, interior, boundary),
            boundary_values=boundary_values,
            boundary_rates=boundary_rates,
            convection_scale=convection_scale,
            n_total=matrices.size,
        )

    @property
    def size(self) -> int:
        """Number of unknowns."""
        return int(self.interior.size)

    @property
    def is_periodic(self) -> bool:
        return self.boundary.size == 0

    def scale(self, t: float) -> float:
        return 1.0 if self.convection_scale is None else self.convection_scale(t)

    def full_state(self, t: float, values: NDArray) -> NDArray:
        """Interior values plus exact boundary values at time ``t``."""
        if self.is_periodic:
            return values
        full = np.zeros(self.n_total, dtype=np.result_type(values, np.float64))
        full[self.interior] = values
        assert self.boundary_values is not None
        full[self.boundary] = self.boundary_values(t)
        return full

    def load(self, t: float, values: NDArray) -> NDArray:
        """The interior load ``G_I(t)``."""
        full = self.full_state(t, values)
        load = -(self.diffusion @ full) - self.scale(t) * (self.convection @ full)
        if not self.is_periodic:
            assert self.mass_boundary is not None and self.boundary_rates is not None
            load = load - self.mass_boundary @ self.boundary_rates(t)
        return load


def solve_mass(
    mass: SparseMatrix, b: NDArray, tol: float = MASS_SOLVE_TOLERANCE
) -> NDArray:
    """Solve ``M x = b`` by Jacobi-preconditioned conjugate gradients.

    Complex right-hand sides are solved part by part.

    Raises:
        SolveFailureError: If ``||M x - b|| > tol ||b||`` after ``10 n`` iterations.
    """
    if np.iscomplexobj(b):
        return solve_mass(mass, b.real, tol) + 1j * solve_mass(mass, b.imag, tol)
    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return np.zeros_like(b, dtype=np.float64)

    n = mass.shape[0]
    inverse_diag = 1.0 / mass.diagonal()
    preconditioner = splinalg.LinearOperator(
        (n, n), matvec=lambda r: inverse_diag * r, dtype=np.float64
    )
    iterations = 0

    def count(_: NDArray) -> None:
        nonlocal iterations
        iterations += 1

    maxiter = MASS_SOLVE_ITERATION_FACTOR * n
    x = np.zeros(n)
    residual = b_norm
    # the recurrence residual can drift from the true one; one restart recovers it
    for _ in range(2):
        x, info = splinalg.cg(
            mass, b, x0=x, rtol=tol, atol=0.0, maxiter=maxiter, M=preconditioner, callback=count
        )
        residual = float(np.linalg.norm(mass @ x - b))
        if info < 0:
            break
        if residual <= tol * b_norm:
            logger.debug("solve_mass: %d iterations, relative residual %.2e", iterations, residual / b_norm)
            return x
    raise SolveFailureError(
        f"conjugate gradients stopped at relative residual {residual / b_norm:.3e}",
        iterations=iterations,
        residual=residual / b_norm,
    )


def rhs(selector: SchemeSelector, system: SemiDiscreteSystem, state: StateVector) -> NDArray:
    """Time derivative of the unknowns under the chosen mass treatment."""
    load = system.load(state.t, state.values)
    if selector.kind is SchemeKind.LUMPED:
        return system.lumped.solve(load)
    if selector.kind is SchemeKind.CORRECTED:
        return correction_apply(system.mass, system.lumped, load, selector.n)
    return solve_mass(system.mass, load)


def rk4_step(f: RightHandSide, state: StateVector, tau: float) -> StateVector:
    """One classical fourth-order Runge-Kutta step.

    ``f(t, y)`` is evaluated at ``t``, ``t + tau/2`` and ``t + tau``, so boundary
    data read inside ``f`` is taken at each stage time.
    """
    if tau <= 0.0:
        raise DomainError(f"time step must be positive, got {tau}")
    t, y = state.t, state.values
    k1 = f(t, y)
    k2 = f(t + 0.5 * tau, y + 0.5 * tau * k1)
    k3 = f(t + 0.5 * tau, y + 0.5 * tau * k2)
    k4 = f(t + tau, y + tau * k3)
    return StateVector(values=y + tau * (k1 + 2.0 * (k2 + k3) + k4) / 6.0, t=t + tau)


def iter_steps(
    selector: SchemeSelector,
    system: SemiDiscreteSystem,
    initial: StateVector,
    t_end: float,
    tau: float,
) -> Iterator[StateVector]:
    """Yield the state after every RK4 step up to ``t_end``.

    The final step is shortened to land on ``t_end``.

    Raises:
        DomainError: If ``tau <= 0`` or ``t_end`` precedes the initial time.
        NonFiniteError: If the state stops being finite.
    """
    if tau <= 0.0:
        raise DomainError(f"time step must be positive, got {tau}")
    t0 = initial.t
    if t_end < t0:
        raise DomainError(f"t_end={t_end} precedes the initial time {t0}")
    n_steps = math.ceil((t_end - t0) / tau * (1.0 - 1e-12))

    def f(t: float, y: NDArray) -> NDArray:
        return rhs(selector, system, StateVector(values=y, t=t))

    state = initial
    for k in range(n_steps):
        stop = t_end if k == n_steps - 1 else t0 + (k + 1) * tau
        state = rk4_step(f, state, stop - state.t)
        state = StateVector(values=state.values, t=stop)
        if not np.all(np.isfinite(state.values)):
            raise NonFiniteError(f"state became non-finite at t={stop:g}", time=stop)
        yield state


def evolve(
    selector: SchemeSelector,
    system: SemiDiscreteSystem,
    initial: StateVector,
    t_end: float,
    tau: float,
) -> StateVector:
    """Integrate from ``initial.t`` to ``t_end`` with RK4."""
    state = initial
    steps = 0
    for state in iter_steps(selector, system, initial, t_end, tau):
        steps += 1
    logger.debug("evolve %s: %d steps of tau=%.3e to t=%g", selector, steps, tau, t_end)
    return state


def evolve_symbol_exact(
    selector: SchemeSelector, params: SchemeParams, t: float
) -> tuple[float, float]:
    """Time-exact relative and absolute max-norm error of a unit harmonic.

    On a uniform periodic mesh a single harmonic is an eigenvector of every
    scheme, so the semi-discrete solution is ``exp(t*omega)`` times the initial data.
    """
    omega = scheme_symbol(selector, params)
    exact = exact_symbol(params)
    return harmonic_rel_error(omega, exact, t), harmonic_abs_error(omega, exact, t)


def harmonic_state(mesh: Mesh1DPeriodic, p: float, amplitude: float = 1.0) -> NDArray[np.complex128]:
    """Nodal values ``A*exp(i*p*x_k)`` of a harmonic."""
    return amplitude * np.exp(1j * p * mesh.coordinates())


def _series_factor(selector: SchemeSelector, dim: int) -> float:
    q = correction_bound(dim)
    if selector.kind is SchemeKind.CONSISTENT:
        return 1.0 / (1.0 - q)
    return sum(q**k for k in range(selector.n + 1))


def stability_time_step(
    system: SemiDiscreteSystem, selector: SchemeSelector, t: float = 0.0
) -> float:
    """RK4 stability limit from a Gershgorin bound of the scheme operator.

    The bound is ``max_i (sum_j |K_ij| + |s| sum_j |C_ij|) / Mbar_ii`` times the
    norm bound of the Neumann series.
    """
    diffusion_rows = np.asarray(abs(system.diffusion).sum(axis=1)).ravel()
    convection_rows = np.asarray(abs(system.convection).sum(axis=1)).ravel()
    rows = diffusion_rows + abs(system.scale(t)) * convection_rows
    radius = float(np.max(rows / system.lumped.diag)) * _series_factor(selector, system.dim)
    if radius == 0.0:
        return math.inf
    return TIME_STEP_SAFETY * RK4_STABILITY_RADIUS / radius


def _rk4_mode(omega: complex, t_end: float, tau: float) -> complex:
    """RK4 solution of ``y' = omega*y``, ``y(0) = 1`` at ``t_end``."""

    def amplification(step: float) -> complex:
        z = omega * step
        return 1.0 + z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)))

    full = int(t_end / tau * (1.0 + 1e-12))
    rest = t_end - full * tau
    y = amplification(tau) ** full
    if rest > 1e-14 * t_end:
        y *= amplification(rest)
    return y


def select_time_step(
    system: SemiDiscreteSystem,
    selector: SchemeSelector,
    requested: float | None = None,
    omega: complex | None = None,
    t_end: float | None = None,
    spatial_error: float | None = None,
) -> float:
    """Choose the RK4 step.

    Starts from ``min(requested, stability_time_step)``. When the symbol ``omega``
    of a single periodic harmonic is given, the step is halved until the
    Richardson estimate of the relative time error at ``t_end`` falls below
    ``RICHARDSON_FACTOR * spatial_error``.
    """
    tau = stability_time_step(system, selector)
    if requested is not None:
        if requested <= 0.0:
            raise DomainError(f"time step must be positive, got {requested}")
        if requested > tau:
            logger.info("requested tau=%.3e exceeds the stability limit, using %.3e", requested, tau)
        tau = min(tau, requested)
    if omega is None or t_end is None or not spatial_error or t_end <= 0.0:
        return tau

    tau = min(tau, t_end)
    target = RICHARDSON_FACTOR * spatial_error
    reference = abs(cmath.exp(omega * t_end))
    for _ in range(MAX_STEP_HALVINGS):
        coarse = _rk4_mode(omega, t_end, tau)
        fine = _rk4_mode(omega, t_end, 0.5 * tau)
        estimate = abs(coarse - fine) * 16.0 / 15.0 / reference
        if estimate < target:
            logger.debug("select_time_step: tau=%.3e, time error estimate %.2e", tau, estimate)
            return tau
        tau *= 0.5
    logger.warning(
        "select_time_step: time error estimate still %.2e after %d halvings (target %.2e)",
        estimate,
        MAX_STEP_HALVINGS,
        target,
    )
    return tau


def restrict(matrix: SparseMatrix, rows: NDArray[np.int64], cols: NDArray[np.int64]) -> SparseMatrix:
    """Submatrix on ``rows`` x ``cols`` in CSR form."""
    return sparse.csr_matrix(matrix.tocsr()[rows][:, cols])
