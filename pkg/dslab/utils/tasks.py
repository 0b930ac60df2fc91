# Copyright dslab 2026-Present
# Full MIT License can be found in `LICENSE` at the project root.

from __future__ import annotations

import asyncio
import logging
from concurrent.futures import Executor, ProcessPoolExecutor
from typing import TYPE_CHECKING, Generic, TypeVar

from . import __package__
from ..exceptions import InvalidConfigValue, RunError

if TYPE_CHECKING:
    from typing import Callable, List, Optional, Sequence


_log = logging.getLogger(__package__)

T = TypeVar("T")
R = TypeVar("R")


class SeedPool(Generic[T, R]):
    """Runs one job per seed on a pool of worker processes.

    Jobs are plain picklable callables. Every job owns its own random
    stream, so results never depend on the number of workers or on the
    order in which workers finish; they are always returned in submission
    order.

    Parameters
    ----------
    job: Callable[[T], R]
        The module level function executed for each item.
    workers: :class:`int`
        Number of worker processes. ``1`` runs every job inline in the
        calling process.
        |default| ``1``
    """

    def __init__(self, job: Callable[[T], R], workers: int = 1):
        if workers < 1:
            raise InvalidConfigValue(
                f"Worker count must be at least 1 (got {workers}).",
                "workers"
            )

        self.job = job
        self.workers = workers

    def _executor(self) -> Optional[Executor]:
        if self.workers == 1:
            return None

        return ProcessPoolExecutor(max_workers=self.workers)

    async def __execute(
        self,
        loop: asyncio.AbstractEventLoop,
        executor: Optional[Executor],
        item: T
    ) -> R:
        _log.debug("Scheduling job for `%s`", item)

        try:
            if executor is None:
                return self.job(item)

            return await loop.run_in_executor(executor, self.job, item)
        except RunError:
            raise
        except Exception as e:
            _log.error("Job for `%s` failed: %s", item, e)
            raise RunError(
                f"Job for `{item}` failed: {e}", getattr(item, "seed", None)
            ) from e

    async def map(self, items: Sequence[T]) -> List[R]:
        """|coro|

        Execute the job for every item.

        Parameters
        ----------
        items: Sequence[T]
            The job inputs.

        Returns
        -------
        List[R]
            The job results in the order of ``items``.

        Raises
        ------
        RunError
            At least one job failed; the first failure is raised after
            every job has finished.
        """
        loop = asyncio.get_running_loop()
        executor = self._executor()

        try:
            results = await asyncio.gather(
                *(self.__execute(loop, executor, item) for item in items),
                return_exceptions=True
            )
        finally:
            if executor is not None:
                executor.shutdown(wait=True)

        for result in results:
            if isinstance(result, BaseException):
                raise result

        return list(results)

    def run(self, items: Sequence[T]) -> List[R]:
        """Blocking variant of :meth:`map`."""
        return asyncio.run(self.map(items))
