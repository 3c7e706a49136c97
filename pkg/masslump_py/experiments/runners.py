"""Convergence sweeps on periodic 1D meshes and FEM runs on simplicial meshes."""

import logging
from collections.abc import Sequence

import numpy as np

from ..exceptions.errors import DomainError, SignChangeError
from ..fem.assembly import assemble_system, contraction_estimate
from ..fem.integrate import SemiDiscreteSystem, StateVector, evolve, evolve_symbol_exact, select_time_step
from ..fem.mesh import Mesh1DPeriodic, MeshLike, uniform_1d_periodic
from ..fourier.dispersion import harmonic_gap, harmonic_rel_difference
from ..fourier.symbols import scheme_symbol
from ..models.reports import ConvergenceMode, ConvergenceRow, ConvergenceTable, ErrorReport, PairGap
from ..models.schemes import SchemeSelector
from .exact import ExactSolution, Harmonic1D
from .norms import empirical_order, error_norms, node_coordinates

logger = logging.getLogger(__name__)

Pair = tuple[str, str]

DIFFUSIVE_PAIRS: tuple[Pair, ...] = (("2", "1"), ("3", "2"), ("G", "1"), ("G", "2"), ("G", "3"))
TRANSPORT_PAIRS: tuple[Pair, ...] = (("1", "2"), ("2", "3"), ("1", "G"), ("2", "G"), ("3", "G"))
DEFAULT_SCHEMES: tuple[str, ...] = ("L", "1", "2", "3", "G")


def default_pairs(example: Harmonic1D) -> tuple[Pair, ...]:
    """The pairs whose gaps are positive on fine meshes for this example."""
    return DIFFUSIVE_PAIRS if example.kappa > 0.0 else TRANSPORT_PAIRS


def default_schemes() -> list[SchemeSelector]:
    return [SchemeSelector.parse(label) for label in DEFAULT_SCHEMES]


def _example_name(example: ExactSolution) -> str:
    return example.name or type(example).__name__


def _check_pairs(pairs: Sequence[Pair], schemes: Sequence[SchemeSelector]) -> list[Pair]:
    labels = {s.label for s in schemes}
    checked = []
    for first, second in pairs:
        if first not in labels or second not in labels:
            raise DomainError(f"pair ({first},{second}) uses a scheme that is not being run")
        checked.append((first, second))
    return checked


def _default_pairs_for(example: Harmonic1D, schemes: Sequence[SchemeSelector]) -> list[Pair]:
    labels = {s.label for s in schemes}
    return [pair for pair in default_pairs(example) if pair[0] in labels and pair[1] in labels]


def _build_system(example: ExactSolution, mesh: MeshLike) -> SemiDiscreteSystem:
    """Assemble the semi-discrete system of ``example`` on ``mesh``.

    Periodic 1D meshes integrate every node; simplicial meshes take exact
    Dirichlet data from the solution on their boundary nodes.
    """
    if mesh.dim != example.dim:
        raise DomainError(f"example is {example.dim}D but the mesh is {mesh.dim}D")
    if isinstance(mesh, Mesh1DPeriodic):
        if not isinstance(example, Harmonic1D):
            raise DomainError("periodic meshes need a harmonic example")
        matrices = assemble_system(mesh, example.kappa, example.lam)
        return SemiDiscreteSystem.periodic(matrices)

    matrices = assemble_system(mesh, example.kappa, example.velocity)
    boundary = mesh.boundary_nodes
    boundary_points = mesh.nodes[boundary]
    system = SemiDiscreteSystem.dirichlet(
        matrices,
        dim=mesh.dim,
        interior=mesh.interior_nodes,
        boundary=boundary,
        boundary_values=lambda t: example.evaluate(t, boundary_points),
        boundary_rates=lambda t: example.time_derivative(t, boundary_points),
        convection_scale=example.convection_scale,
    )
    contraction_estimate(system.mass, system.lumped)
    return system


def _initial_state(example: ExactSolution, mesh: MeshLike, system: SemiDiscreteSystem) -> StateVector:
    values = example.evaluate(0.0, node_coordinates(mesh))
    return StateVector(values=values[system.interior], t=0.0)


def _symbol_errors(
    example: Harmonic1D, schemes: Sequence[SchemeSelector], h: float, t: float
) -> dict[str, ErrorReport]:
    params = example.params(h)
    errors = {}
    for selector in schemes:
        rel, absolute = evolve_symbol_exact(selector, params, t)
        # a single harmonic has the same error modulus on every node
        errors[selector.label] = ErrorReport(
            scheme=selector.label,
            inf_abs=example.amplitude * absolute,
            inf_rel=rel,
            l2_rel=rel,
        )
    return errors


def _stepped_errors(
    example: Harmonic1D,
    schemes: Sequence[SchemeSelector],
    mesh: Mesh1DPeriodic,
    t: float,
    tau: float | None,
) -> dict[str, ErrorReport]:
    params = example.params(mesh.h)
    system = _build_system(example, mesh)
    initial = _initial_state(example, mesh, system)
    reference = _symbol_errors(example, schemes, mesh.h, t)
    errors = {}
    for selector in schemes:
        step = select_time_step(
            system,
            selector,
            requested=tau,
            omega=scheme_symbol(selector, params).to_complex(),
            t_end=t,
            spatial_error=reference[selector.label].inf_rel,
        )
        final = evolve(selector, system, initial, t, step)
        errors[selector.label] = error_norms(final, example, mesh, t, scheme=selector.label)
    return errors


def convergence_row(
    example: Harmonic1D,
    n_nodes: int,
    schemes: Sequence[SchemeSelector],
    mode: ConvergenceMode,
    t: float,
    pairs: Sequence[Pair],
    tau: float | None = None,
) -> ConvergenceRow:
    """Errors and pair gaps for one mesh; orders are filled in by :func:`assemble_table`."""
    mesh = uniform_1d_periodic(example.a, example.b, n_nodes)
    if mode is ConvergenceMode.SYMBOL_EXACT:
        errors = _symbol_errors(example, schemes, mesh.h, t)
    else:
        errors = _stepped_errors(example, schemes, mesh, t, tau)

    by_label = {s.label: s for s in schemes}
    params = example.params(mesh.h)
    gaps = []
    for first, second in pairs:
        if mode is ConvergenceMode.SYMBOL_EXACT:
            gap = example.amplitude**2 * harmonic_gap(by_label[first], by_label[second], params, t)
            rel_difference = harmonic_rel_difference(by_label[first], by_label[second], params, t)
        else:
            gap = errors[first].inf_abs ** 2 - errors[second].inf_abs ** 2
            rel_difference = errors[first].inf_rel - errors[second].inf_rel
        gaps.append(PairGap(first=first, second=second, gap=gap, rel_difference=rel_difference))
    logger.info("column N=%d (h=%.4e) done in %s mode", n_nodes, mesh.h, mode.value)
    return ConvergenceRow(n_nodes=n_nodes, h=mesh.h, errors=errors, pairs=gaps)


def assemble_table(
    example: ExactSolution,
    mode: ConvergenceMode,
    t: float,
    schemes: Sequence[SchemeSelector],
    pairs: Sequence[Pair],
    rows: Sequence[ConvergenceRow],
) -> ConvergenceTable:
    """Collect columns into a table and fill in the empirical orders."""
    ordered: list[ConvergenceRow] = []
    previous: ConvergenceRow | None = None
    for row in rows:
        if previous is not None:
            filled = []
            for entry in row.pairs:
                before = previous.pair(entry.key)
                try:
                    order: float | None = empirical_order(before.gap, entry.gap, previous.h, row.h)
                except SignChangeError:
                    logger.debug("pair %s changes sign between N=%d and N=%d", entry.key, previous.n_nodes, row.n_nodes)
                    order = None
                filled.append(entry.model_copy(update={"order": order}))
            row = row.model_copy(update={"pairs": filled})
        ordered.append(row)
        previous = row
    return ConvergenceTable(
        example=_example_name(example),
        mode=mode,
        t=t,
        schemes=[s.label for s in schemes],
        pair_keys=[f"{first},{second}" for first, second in pairs],
        rows=ordered,
    )


def prepare_convergence(
    example: ExactSolution,
    ns: Sequence[int],
    schemes: Sequence[SchemeSelector] | None,
    pairs: Sequence[Pair] | None,
) -> tuple[Harmonic1D, list[SchemeSelector], list[Pair]]:
    """Validate the inputs of a 1D sweep and fill in the defaults."""
    if not isinstance(example, Harmonic1D):
        raise DomainError("convergence sweeps need a harmonic 1D example")
    if not ns:
        raise DomainError("at least one node count is required")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError(f"node counts must be strictly increasing, got {list(ns)}")
    selected = list(schemes) if schemes else default_schemes()
    chosen = _check_pairs(pairs, selected) if pairs is not None else _default_pairs_for(example, selected)
    return example, selected, chosen


def run_convergence_1d(
    example: ExactSolution,
    ns: Sequence[int],
    schemes: Sequence[SchemeSelector] | None = None,
    mode: ConvergenceMode = ConvergenceMode.SYMBOL_EXACT,
    t: float | None = None,
    pairs: Sequence[Pair] | None = None,
    tau: float | None = None,
) -> ConvergenceTable:
    """Grid convergence study of a harmonic on uniform periodic meshes.

    Args:
        example: A :class:`Harmonic1D` solution; its interval is the domain.
        ns: Total node counts, strictly increasing.
        schemes: Schemes to compare, ``L, 1, 2, 3, G`` by default.
        mode: Closed-form symbol errors or RK4 time stepping.
        t: Evaluation time, ``example.t_end`` by default.
        pairs: Scheme pairs ``(k, j)`` whose gaps are tabulated; defaults to the
            diffusive or pure-transport pairs depending on ``kappa``.
        tau: Upper bound on the RK4 step in time-stepped mode.

    Returns:
        One row per node count with errors, gaps and empirical orders.

    Raises:
        DomainError: If the example is not 1D harmonic, ``ns`` is not increasing
            or a pair names a scheme that is not run.
    """
    harmonic, selected, chosen = prepare_convergence(example, ns, schemes, pairs)
    time = harmonic.t_end if t is None else t
    rows = [convergence_row(harmonic, n, selected, mode, time, chosen, tau) for n in ns]
    return assemble_table(harmonic, mode, time, selected, chosen, rows)


def common_time_step(
    system: SemiDiscreteSystem, schemes: Sequence[SchemeSelector], tau: float | None
) -> float:
    """Smallest admissible step over all schemes, so every scheme uses the same one."""
    return min(select_time_step(system, selector, requested=tau) for selector in schemes)


def run_fem(
    example: ExactSolution,
    mesh: MeshLike,
    schemes: Sequence[SchemeSelector],
    tau: float | None = None,
    t_end: float | None = None,
) -> list[ErrorReport]:
    """Evolve every scheme from exact initial data and report its errors.

    Args:
        example: Exact solution supplying initial and boundary data.
        mesh: A simplicial mesh of the example's dimension (or a periodic 1D
            mesh for a harmonic example).
        schemes: Schemes to run.
        tau: Upper bound on the RK4 step; the stability limit applies as well.
        t_end: Final time, ``example.t_end`` by default.

    Returns:
        One report per scheme, in the order given.

    Raises:
        DomainError: If the dimensions disagree or ``t_end < 0``.
    """
    if not schemes:
        raise DomainError("at least one scheme is required")
    time = example.t_end if t_end is None else t_end
    if time < 0.0:
        raise DomainError(f"t_end must be >= 0, got {time}")
    system = _build_system(example, mesh)
    initial = _initial_state(example, mesh, system)
    step = common_time_step(system, schemes, tau)
    logger.info("%s: %d unknowns, tau=%.3e, t_end=%g", _example_name(example), system.size, step, time)

    reports = []
    for selector in schemes:
        final = evolve(selector, system, initial, time, step)
        full = StateVector(values=system.full_state(time, final.values), t=time)
        report = error_norms(full, example, mesh, time, scheme=selector.label)
        logger.info(
            "scheme %s: inf_rel=%.4e l2_rel=%.4e", selector.label, report.inf_rel, report.l2_rel
        )
        reports.append(report)
    return reports


def consistent_proximity(
    example: ExactSolution,
    mesh: MeshLike,
    ns: Sequence[int],
    tau: float | None = None,
    t_end: float | None = None,
) -> dict[int, float]:
    """Max-norm distance between each corrected solution and the consistent one.

    Returns:
        ``{n: ||u_n - u_G||_inf}`` for every correction count in ``ns``.
    """
    if any(n < 1 for n in ns):
        raise DomainError("correction counts must be >= 1")
    time = example.t_end if t_end is None else t_end
    system = _build_system(example, mesh)
    initial = _initial_state(example, mesh, system)
    consistent = SchemeSelector.consistent()
    corrected = [SchemeSelector.corrected(n) for n in ns]
    step = common_time_step(system, [*corrected, consistent], tau)

    reference = evolve(consistent, system, initial, time, step).values
    distances = {}
    for selector in corrected:
        values = evolve(selector, system, initial, time, step).values
        distances[selector.n] = float(np.abs(values - reference).max())
        logger.debug("corrections=%d: distance to consistent %.4e", selector.n, distances[selector.n])
    return distances
