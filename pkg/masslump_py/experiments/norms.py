"""Error norms and empirical convergence orders."""

import logging
import math

import numpy as np
from numpy.typing import NDArray

from ..exceptions.errors import AllNodesExcludedError, DomainError, SignChangeError
from ..fem.integrate import StateVector
from ..fem.mesh import Mesh1DPeriodic, MeshLike
from ..models.reports import ErrorReport
from .exact import ExactSolution

logger = logging.getLogger(__name__)

EXCLUSION_THRESHOLD = 1e-10


def node_coordinates(mesh: MeshLike) -> NDArray[np.float64]:
    """Coordinates of every node carrying a value, shape ``(N, dim)``."""
    if isinstance(mesh, Mesh1DPeriodic):
        return mesh.coordinates()[:, None]
    return mesh.nodes


def error_norms_from_values(
    numeric: NDArray, exact: NDArray, scheme: str = ""
) -> ErrorReport:
    """Compare nodal values.

    ``inf_rel`` skips nodes with ``|u_exact| < EXCLUSION_THRESHOLD``; the other
    two norms use every node.

    Raises:
        DomainError: If the arrays differ in shape or are empty.
        AllNodesExcludedError: If every node falls under the threshold.
    """
    numeric = np.asarray(numeric)
    exact = np.asarray(exact)
    if numeric.shape != exact.shape or numeric.size == 0:
        raise DomainError(
            f"numeric and exact values must have the same non-empty shape, "
            f"got {numeric.shape} and {exact.shape}"
        )
    err = np.abs(numeric - exact)
    magnitude = np.abs(exact)
    kept = magnitude >= EXCLUSION_THRESHOLD
    excluded = int(err.size - np.count_nonzero(kept))
    if excluded == err.size:
        raise AllNodesExcludedError(
            f"all {err.size} nodes have |u_exact| below {EXCLUSION_THRESHOLD:g}"
        )
    if excluded:
        logger.debug("%d nodes excluded from the relative max norm", excluded)
    exact_norm = float(np.linalg.norm(magnitude))
    return ErrorReport(
        scheme=scheme,
        inf_abs=float(err.max()),
        inf_rel=float((err[kept] / magnitude[kept]).max()),
        l2_rel=float(np.linalg.norm(err)) / exact_norm,
        excluded_nodes=excluded,
    )


def error_norms(
    numeric: StateVector, sol: ExactSolution, mesh: MeshLike, t: float | None = None, scheme: str = ""
) -> ErrorReport:
    """Error norms of a full nodal state against an exact solution.

    Args:
        numeric: Values on every mesh node (boundary nodes included).
        sol: The exact solution.
        mesh: Mesh the values live on.
        t: Evaluation time, ``numeric.t`` by default.
        scheme: Label stored on the report.

    Returns:
        The absolute and relative max norms and the relative discrete l2 norm.

    Raises:
        DomainError: If the state does not match the mesh.
        AllNodesExcludedError: If the exact solution vanishes on every node.
    """
    time = numeric.t if t is None else t
    exact = sol.evaluate(time, node_coordinates(mesh))
    return error_norms_from_values(numeric.values, exact, scheme=scheme)


def empirical_order(a_prev: float, a_cur: float, h_prev: float, h_cur: float) -> float:
    """``ln(a_prev/a_cur) / ln(h_prev/h_cur)``.

    Both values may be negative; a mixed or zero pair has no order.

    Raises:
        SignChangeError: If ``a_prev * a_cur <= 0``.
        DomainError: Unless ``h_prev > h_cur > 0``.
    """
    if not h_prev > h_cur > 0.0:
        raise DomainError(f"need h_prev > h_cur > 0, got {h_prev} and {h_cur}")
    if a_prev * a_cur <= 0.0 or not (math.isfinite(a_prev) and math.isfinite(a_cur)):
        raise SignChangeError(f"values {a_prev:.4e} and {a_cur:.4e} do not share a sign")
    return math.log(a_prev / a_cur) / math.log(h_prev / h_cur)
