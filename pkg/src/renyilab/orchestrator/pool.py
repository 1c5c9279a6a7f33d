"""Thread-backed work queue with index-ordered results."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
import logging
from queue import Empty, Queue
from threading import Event as ThreadEvent
from threading import Lock, Thread
from typing import Generic, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass(slots=True)
class _Collector(Generic[T]):
    results: dict[int, T]
    errors: list[tuple[int, BaseException]]
    lock: Lock


@dataclass(slots=True)
class WorkQueue:
    """Runs ``task(index)`` for every index and returns results in index order.

    ``workers=1`` runs inline. Tasks must not share mutable state; each one
    receives only its index, so serial and threaded runs give the same rows.
    """

    workers: int = 1
    name: str = "renyilab"

    def map(self, task: Callable[[int], T], count: int) -> list[T]:
        if self.workers <= 1 or count <= 1:
            return [task(i) for i in range(count)]
        pending: Queue[int] = Queue()
        for i in range(count):
            pending.put(i)
        collector: _Collector[T] = _Collector(results={}, errors=[], lock=Lock())
        stop_event = ThreadEvent()
        threads = [
            Thread(
                target=self._run,
                args=(task, pending, collector, stop_event),
                name=f"{self.name}-worker-{k}",
                daemon=True,
            )
            for k in range(min(self.workers, count))
        ]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
        if collector.errors:
            _, exc = min(collector.errors, key=lambda item: item[0])
            raise exc
        return [collector.results[i] for i in range(count)]

    def _run(
        self,
        task: Callable[[int], T],
        pending: Queue[int],
        collector: _Collector[T],
        stop_event: ThreadEvent,
    ) -> None:
        while not stop_event.is_set():
            try:
                index = pending.get_nowait()
            except Empty:
                return
            try:
                result = task(index)
            except Exception as exc:  # noqa: BLE001
                logger.exception(
                    "workqueue.task_failed", extra={"extra": {"queue": self.name, "index": index}}
                )
                with collector.lock:
                    collector.errors.append((index, exc))
                stop_event.set()
                return
            with collector.lock:
                collector.results[index] = result
