"""P1 finite-element matrices and the matrix-free Neumann correction.

All element integrals are exact closed forms for linear Lagrange elements:
with barycentric coordinates ``l_i`` on a ``d``-simplex ``T``,

    int_T l_i l_j = |T| (1 + delta_ij) / ((d + 1)(d + 2))

and the gradients of ``l_i`` are read off the inverse of the vertex matrix
``[1, x_i]``.
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy import sparse

from ..exceptions.errors import DegenerateElementError, DomainError, NonPositiveLumpingError
from .mesh import Mesh1DPeriodic, MeshLike, SimplicialMesh

logger = logging.getLogger(__name__)

SparseMatrix = sparse.csr_matrix
VelocityField = Callable[[NDArray[np.float64]], NDArray[np.float64]]
Velocity = float | NDArray[np.float64] | tuple[float, ...] | VelocityField


@dataclass(frozen=True)
class LumpedMass:
    """Row-sum lumped mass matrix, stored as its diagonal."""

    diag: NDArray[np.float64]

    def __len__(self) -> int:
        return int(self.diag.shape[0])

    def solve(self, v: NDArray) -> NDArray:
        """Apply the inverse of the lumped matrix."""
        return v / self.diag

    def restrict(self, rows: NDArray[np.int64]) -> "LumpedMass":
        return LumpedMass(diag=self.diag[rows])


@dataclass(frozen=True)
class _Geometry:
    dim: int
    n_dofs: int
    elements: NDArray[np.int64]
    volumes: NDArray[np.float64]
    gradients: NDArray[np.float64]  # (E, d+1, d)
    nodes: NDArray[np.float64]


def _geometry(mesh: MeshLike) -> _Geometry:
    if isinstance(mesh, Mesh1DPeriodic):
        n = mesh.n_unknowns
        left = np.arange(n)
        elements = np.stack([left, (left + 1) % n], axis=1)
        h = mesh.h
        volumes = np.full(n, h)
        gradients = np.broadcast_to(np.array([[-1.0 / h], [1.0 / h]]), (n, 2, 1))
        return _Geometry(1, n, elements, volumes, gradients, mesh.coordinates()[:, None])

    d = mesh.dim
    vertices = mesh.nodes[mesh.elements]  # (E, d+1, d)
    ones = np.ones(vertices.shape[:2] + (1,))
    vertex_matrix = np.concatenate([ones, vertices], axis=2)  # rows [1, x_i]
    signed = mesh.signed_volumes()
    bad = np.flatnonzero(signed <= 0.0)
    if bad.size:
        raise DegenerateElementError(
            f"element {int(bad[0])} has non-positive volume {signed[bad[0]]:.3e}",
            element=int(bad[0]),
        )
    inverse = np.linalg.inv(vertex_matrix)  # column i holds the coefficients of l_i
    gradients = np.transpose(inverse[:, 1:, :], (0, 2, 1))
    return _Geometry(d, mesh.n_nodes, mesh.elements, signed, gradients, mesh.nodes)


def _to_csr(geometry: _Geometry, local: NDArray[np.float64]) -> SparseMatrix:
    k = geometry.elements.shape[1]
    rows = np.repeat(geometry.elements, k, axis=1).ravel()
    cols = np.tile(geometry.elements, (1, k)).ravel()
    matrix = sparse.coo_matrix(
        (local.ravel(), (rows, cols)), shape=(geometry.n_dofs, geometry.n_dofs)
    ).tocsr()
    matrix.sum_duplicates()
    matrix.sort_indices()
    return matrix


def _reference_mass(dim: int) -> NDArray[np.float64]:
    k = dim + 1
    return (np.eye(k) + np.ones((k, k))) / ((dim + 1) * (dim + 2))


def assemble_mass(mesh: MeshLike) -> SparseMatrix:
    """Consistent P1 mass matrix.

    Raises:
        DegenerateElementError: On a simplex with non-positive volume.
    """
    geometry = _geometry(mesh)
    local = geometry.volumes[:, None, None] * _reference_mass(geometry.dim)
    return _to_csr(geometry, local)


def lump(mass: SparseMatrix) -> LumpedMass:
    """Row-sum lumping.

    Raises:
        NonPositiveLumpingError: If a row sum is not strictly positive.
    """
    diag = np.asarray(mass.sum(axis=1), dtype=np.float64).ravel()
    bad = np.flatnonzero(diag <= 0.0)
    if bad.size:
        raise NonPositiveLumpingError(
            f"row {int(bad[0])} of the mass matrix sums to {diag[bad[0]]:.3e}",
            row=int(bad[0]),
        )
    return LumpedMass(diag=diag)


def assemble_diffusion(mesh: MeshLike, kappa: float) -> SparseMatrix:
    """Stiffness matrix ``kappa * int grad(phi_i) . grad(phi_j)``."""
    if kappa < 0.0:
        raise DomainError(f"diffusion coefficient must be >= 0, got {kappa}")
    geometry = _geometry(mesh)
    g = geometry.gradients
    local = kappa * geometry.volumes[:, None, None] * np.einsum("eid,ejd->eij", g, g)
    return _to_csr(geometry, local)


def _nodal_velocity(geometry: _Geometry, velocity: Velocity) -> NDArray[np.float64]:
    if callable(velocity):
        values = np.asarray(velocity(geometry.nodes), dtype=np.float64)
        return values.reshape(geometry.n_dofs, geometry.dim)
    constant = np.atleast_1d(np.asarray(velocity, dtype=np.float64))
    if constant.shape != (geometry.dim,):
        raise DomainError(f"velocity must have {geometry.dim} components")
    return np.broadcast_to(constant, (geometry.n_dofs, geometry.dim))


def assemble_convection(mesh: MeshLike, velocity: Velocity) -> SparseMatrix:
    """Convection matrix ``int phi_i v . grad(phi_j)``.

    ``velocity`` is a constant vector (a scalar in 1D) or a callable mapping
    node coordinates ``(N, d)`` to velocities ``(N, d)``; it is interpolated
    linearly and integrated exactly.
    """
    geometry = _geometry(mesh)
    d = geometry.dim
    nodal = _nodal_velocity(geometry, velocity)[geometry.elements]  # (E, d+1, d)
    weights = nodal.sum(axis=1, keepdims=True) + nodal
    weights *= (geometry.volumes / ((d + 1) * (d + 2)))[:, None, None]
    local = np.einsum("eid,ejd->eij", weights, geometry.gradients)
    return _to_csr(geometry, local)


def correction_apply(
    mass: SparseMatrix, lumped: LumpedMass, v: NDArray, n: int
) -> NDArray:
    """Apply ``(I + A + ... + A^n) Mbar^{-1}`` with ``A = Mbar^{-1}(Mbar - M)``.

    ``Mbar - M`` is never formed; each term costs one product with ``M``.
    Complex ``v`` is supported.

    Raises:
        DomainError: If ``n < 0`` or the shapes disagree.
    """
    if n < 0:
        raise DomainError(f"number of corrections must be >= 0, got {n}")
    if mass.shape[0] != len(lumped) or v.shape[0] != len(lumped):
        raise DomainError("mass matrix, lumped mass and vector sizes differ")
    term = lumped.solve(v)
    total = term.copy()
    for _ in range(n):
        term = term - lumped.solve(mass @ term)
        total += term
    return total


def correction_bound(dim: int) -> float:
    """Spectral bound ``(d + 1)/(d + 2)`` of ``A`` for P1 simplices."""
    return (dim + 1) / (dim + 2)


def contraction_estimate(
    mass: SparseMatrix, lumped: LumpedMass, samples: int = 8, seed: int = 0
) -> float:
    """Empirical ``max ||A v||_inf / ||v||_inf`` over random and power-iterated vectors."""
    rng = np.random.default_rng(seed)
    estimate = 0.0
    for _ in range(samples):
        v = rng.uniform(-1.0, 1.0, size=len(lumped))
        for _ in range(4):
            av = v - lumped.solve(mass @ v)
            norm_v = np.abs(v).max()
            ratio = float(np.abs(av).max() / norm_v) if norm_v > 0.0 else 0.0
            estimate = max(estimate, ratio)
            v = av
    logger.debug("contraction estimate ||A||_inf ~ %.4f", estimate)
    if estimate >= 1.0:
        logger.warning("Neumann correction may diverge: ||A v||/||v|| reached %.4f", estimate)
    return estimate


@dataclass(frozen=True)
class FemMatrices:
    """Assembled matrices of one convection-diffusion problem."""

    mass: SparseMatrix
    lumped: LumpedMass
    diffusion: SparseMatrix
    convection: SparseMatrix

    @property
    def size(self) -> int:
        return len(self.lumped)

    def operator(self, convection_scale: float = 1.0) -> SparseMatrix:
        """``K + s*C``, the matrix moved to the right-hand side with a minus sign."""
        return self.diffusion + convection_scale * self.convection


def assemble_system(mesh: MeshLike, kappa: float, velocity: Velocity) -> FemMatrices:
    """Assemble mass, lumped mass, stiffness and convection on one mesh."""
    mass = assemble_mass(mesh)
    matrices = FemMatrices(
        mass=mass,
        lumped=lump(mass),
        diffusion=assemble_diffusion(mesh, kappa),
        convection=assemble_convection(mesh, velocity),
    )
    logger.debug("assembled system with %d unknowns, %d nonzeros", matrices.size, mass.nnz)
    return matrices
