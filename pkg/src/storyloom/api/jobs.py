"""Background jobs for generation calls that may outlast the 2s window."""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable


@dataclass
class Job:
    job_id: str
    kind: str
    future: Future

    @property
    def state(self) -> str:
        if not self.future.done():
            return "running"
        return "failed" if self.future.exception() else "done"


class JobRunner:
    def __init__(self, max_workers: int = 8):
        self._executor = ThreadPoolExecutor(max_workers=max_workers)
        self._jobs: dict[str, Job] = {}
        self._lock = threading.Lock()

    def submit(self, kind: str, fn: Callable[[], Any]) -> Job:
        job = Job(job_id=uuid.uuid4().hex, kind=kind, future=self._executor.submit(fn))
        with self._lock:
            self._jobs[job.job_id] = job
        return job

    def get(self, job_id: str) -> Job | None:
        with self._lock:
            return self._jobs.get(job_id)

    def shutdown(self) -> None:
        self._executor.shutdown(wait=False, cancel_futures=True)
