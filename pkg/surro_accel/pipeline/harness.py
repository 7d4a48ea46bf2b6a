"""
Bounded-concurrency execution of independent experiment jobs.

A fixed number of asyncio workers drain a job queue inside a TaskGroup. Each
job is a picklable zero-argument callable (typically a functools.partial over
a module-level function) and runs in a process pool when more than one worker
is allowed, so seeds train in parallel without sharing any state. Results are
returned in submission order regardless of completion order.
"""

import asyncio
import logging
from asyncio import QueueShutDown, TaskGroup
from collections.abc import Callable, Sequence
from concurrent.futures import Executor, ProcessPoolExecutor

from surro_accel.utils import get_num_workers, setup_logging

logger = logging.getLogger(__name__)


class ExperimentHarness:
    """Runs experiment jobs with at most num_workers in flight.

    Args:
        num_workers: worker cap; read from SURRO_ACCEL_THREADS when omitted
    """

    def __init__(self, num_workers: int | None = None):
        self.num_workers = get_num_workers() if num_workers is None else num_workers
        assert self.num_workers > 0

    def _executor(self) -> Executor | None:
        if self.num_workers == 1:
            return None
        return ProcessPoolExecutor(
            max_workers=self.num_workers,
            initializer=setup_logging,
            initargs=("surro-accel-worker", True),
        )

    async def _worker[T](
        self,
        worker_id: int,
        queue: asyncio.Queue[tuple[int, Callable[[], T]]],
        results: list[T | None],
        executor: Executor | None,
    ):
        loop = asyncio.get_running_loop()
        logger.debug("starting worker", extra={"worker_id": worker_id})
        while True:
            try:
                index, job = await queue.get()
            except QueueShutDown:
                return
            results[index] = await loop.run_in_executor(executor, job)
            logger.info("job finished", extra={"worker_id": worker_id, "job": index})

    async def run[T](self, jobs: Sequence[Callable[[], T]]) -> list[T]:
        """Run every job and return their results in job order.

        The first failing job cancels the remaining workers; its exception
        propagates (wrapped in an ExceptionGroup by the TaskGroup).
        """
        queue: asyncio.Queue[tuple[int, Callable[[], T]]] = asyncio.Queue()
        for item in enumerate(jobs):
            queue.put_nowait(item)
        queue.shutdown()

        results: list[T | None] = [None] * len(jobs)
        executor = self._executor()
        try:
            async with TaskGroup() as tasks:
                for worker_id in range(min(self.num_workers, max(len(jobs), 1))):
                    tasks.create_task(self._worker(worker_id, queue, results, executor))
        finally:
            if executor is not None:
                executor.shutdown(cancel_futures=True)
        return results

    def map[T](self, jobs: Sequence[Callable[[], T]]) -> list[T]:
        """Synchronous entry point: run jobs on a fresh event loop."""
        try:
            return asyncio.run(self.run(jobs))
        except ExceptionGroup as group:
            raise group.exceptions[0] from group
