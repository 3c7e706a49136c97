"""Async runner that computes table columns concurrently."""

import asyncio
import logging
from collections.abc import Awaitable, Callable, Sequence
from typing import Any, TypeVar

from pydantic import ValidationError

from ..exceptions.errors import DomainError
from ..exceptions.errors import ValidationError as ValidationErr
from ..fem.mesh import MeshLike
from ..models.reports import ConvergenceMode, ConvergenceTable, ErrorReport
from ..models.schemes import SchemeSelector
from .exact import ExactSolution
from .runners import Pair, assemble_table, convergence_row, prepare_convergence, run_fem

logger = logging.getLogger(__name__)

T = TypeVar("T")


class AsyncExperimentRunner:
    """Runs the columns of a study in worker threads.

    Each column (one node count or one mesh) is computed sequentially in its
    own thread; results are identical to the sequential runners.
    """

    def __init__(self, max_concurrency: int = 4) -> None:
        """Initialize the runner.

        Args:
            max_concurrency: Maximum number of columns computed at once.
        """
        if max_concurrency < 1:
            raise DomainError(f"max_concurrency must be >= 1, got {max_concurrency}")
        self.max_concurrency = max_concurrency
        self._semaphore = asyncio.Semaphore(max_concurrency)
        self._tasks: set[asyncio.Task[Any]] = set()
        self._closed = False

    async def __aenter__(self) -> "AsyncExperimentRunner":
        """Async context manager entry."""
        return self

    async def __aexit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        """Async context manager exit."""
        await self.close()

    async def close(self) -> None:
        """Cancel columns that have not finished and refuse new work.

        Cancelling only detaches the awaiting task. A column already handed to
        ``asyncio.to_thread`` keeps computing in its worker thread until it
        returns, so closing the runner does not free the CPU it is using.
        """
        self._closed = True
        pending = [task for task in self._tasks if not task.done()]
        for task in pending:
            task.cancel()
        if pending:
            await asyncio.gather(*pending, return_exceptions=True)
        self._tasks.clear()

    async def _column(self, func: Callable[..., T], *args: Any) -> T:
        async with self._semaphore:
            return await asyncio.to_thread(func, *args)

    def _check_open(self) -> None:
        if self._closed:
            raise DomainError("runner is closed")

    async def _gather(self, jobs: Sequence[Awaitable[T]]) -> list[T]:
        tasks = [asyncio.ensure_future(job) for job in jobs]
        self._tasks.update(tasks)
        try:
            return list(await asyncio.gather(*tasks))
        finally:
            self._tasks.difference_update(tasks)

    async def run_convergence_1d(
        self,
        example: ExactSolution,
        ns: Sequence[int],
        schemes: Sequence[SchemeSelector] | None = None,
        mode: ConvergenceMode | str = ConvergenceMode.SYMBOL_EXACT,
        t: float | None = None,
        pairs: Sequence[Pair] | None = None,
        tau: float | None = None,
    ) -> ConvergenceTable:
        """Concurrent version of :func:`~masslump_py.experiments.runners.run_convergence_1d`.

        Args:
            example: A harmonic 1D solution.
            ns: Total node counts, strictly increasing.
            schemes: Schemes to compare.
            mode: ``symbol`` or ``time-stepped``.
            t: Evaluation time.
            pairs: Scheme pairs whose gaps are tabulated.
            tau: Upper bound on the RK4 step in time-stepped mode.

        Returns:
            The assembled convergence table.

        Raises:
            ValidationError: If ``mode`` is not a known mode.
            DomainError: For invalid inputs, as in the sequential runner.
        """
        self._check_open()
        try:
            mode = ConvergenceMode(mode)
        except ValueError as e:
            raise ValidationErr(f"Invalid convergence mode: {mode!r}") from e
        harmonic, selected, chosen = prepare_convergence(example, ns, schemes, pairs)
        time = harmonic.t_end if t is None else t
        logger.info("running %d columns with up to %d at once", len(ns), self.max_concurrency)
        rows = await self._gather(
            [
                self._column(convergence_row, harmonic, n, selected, mode, time, chosen, tau)
                for n in ns
            ]
        )
        try:
            return assemble_table(harmonic, mode, time, selected, chosen, rows)
        except ValidationError as e:
            raise ValidationErr(f"Invalid convergence table: {e}") from e

    async def run_fem(
        self,
        example: ExactSolution,
        meshes: Sequence[MeshLike],
        schemes: Sequence[SchemeSelector],
        tau: float | None = None,
        t_end: float | None = None,
    ) -> list[list[ErrorReport]]:
        """Run :func:`~masslump_py.experiments.runners.run_fem` on several meshes.

        Args:
            example: Exact solution supplying initial and boundary data.
            meshes: One mesh per table column.
            schemes: Schemes to run on every mesh.
            tau: Upper bound on the RK4 step.
            t_end: Final time.

        Returns:
            The reports of each mesh, in the order of ``meshes``.
        """
        self._check_open()
        return await self._gather(
            [self._column(run_fem, example, mesh, schemes, tau, t_end) for mesh in meshes]
        )
