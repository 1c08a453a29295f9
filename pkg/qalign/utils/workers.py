"""Asyncio queue that fans independent trials out to worker threads."""
from __future__ import annotations

import asyncio
import logging
from collections.abc import Callable, Sequence
from typing import Any, Generic, TypeVar

logger = logging.getLogger("qalign.workers")

R = TypeVar("R")


class TrialQueue(Generic[R]):
    """Queue of indexed jobs drained by named worker tasks.

    Each job runs on a thread via ``asyncio.to_thread``; its result is stored in the
    slot of its index, so the collected list keeps submission order.
    """

    def __init__(self, size: int) -> None:
        self.queue: asyncio.Queue[tuple[int, Callable[[], R]]] = asyncio.Queue()
        self.results: list[R | None] = [None] * size
        self.errors: list[tuple[int, BaseException]] = []
        self._workers: list[asyncio.Task[None]] = []
        self._shutdown_event = asyncio.Event()

    async def start_workers(self, count: int) -> None:
        for index in range(count):
            worker = asyncio.create_task(self._worker_loop(index), name=f"trial-worker-{index}")
            self._workers.append(worker)
            logger.debug("Started worker %s", worker.get_name())

    async def enqueue(self, index: int, job: Callable[[], R]) -> None:
        await self.queue.put((index, job))

    async def _worker_loop(self, worker_id: int) -> None:
        """Process jobs until shutdown; a failing job is recorded and the worker keeps going."""

        while not self._shutdown_event.is_set():
            try:
                index, job = await self.queue.get()
            except asyncio.CancelledError:
                break

            try:
                self.results[index] = await asyncio.to_thread(job)
            except asyncio.CancelledError:
                logger.info("Worker %s cancelled during trial %s.", worker_id, index)
                raise
            except Exception as exc:  # noqa: BLE001 - re-raised by run_parallel once the queue drains
                logger.error("Trial %s failed on worker %s: %s", index, worker_id, exc)
                self.errors.append((index, exc))
            finally:
                self.queue.task_done()

    async def shutdown(self) -> None:
        self._shutdown_event.set()
        for worker in self._workers:
            worker.cancel()
        await asyncio.gather(*self._workers, return_exceptions=True)
        self._workers.clear()
        logger.debug("All trial workers have been shut down.")


async def _collect(jobs: Sequence[Callable[[], R]], workers: int) -> list[Any]:
    trial_queue: TrialQueue[R] = TrialQueue(len(jobs))
    await trial_queue.start_workers(max(1, min(workers, len(jobs))))
    try:
        for index, job in enumerate(jobs):
            await trial_queue.enqueue(index, job)
        await trial_queue.queue.join()
    finally:
        await trial_queue.shutdown()

    if trial_queue.errors:
        raise min(trial_queue.errors, key=lambda item: item[0])[1]
    return trial_queue.results


def run_parallel(jobs: Sequence[Callable[[], R]], workers: int) -> list[R]:
    """Run independent jobs on worker threads; results keep the order of ``jobs``."""

    if not jobs:
        return []
    return asyncio.run(_collect(jobs, workers))
