"""Ordered worker pool for independent experiment items."""

import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from loguru import logger
from tqdm import tqdm


class TaskStatus(str, Enum):
    """Task status enumeration"""
    PENDING = "pending"
    RUNNING = "running"
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass
class TaskResult:
    """Task execution result"""
    task_id: str
    status: TaskStatus = TaskStatus.PENDING
    result: Optional[Any] = None
    error: Optional[str] = None
    error_type: Optional[str] = None
    duration: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == TaskStatus.SUCCESS

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "task_id": self.task_id,
            "status": self.status.value,
            "error": self.error,
            "error_type": self.error_type,
        }


Task = Tuple[str, Callable[[], Any]]


def _execute(task_id: str, fn: Callable[[], Any]) -> TaskResult:
    record = TaskResult(task_id=task_id, status=TaskStatus.RUNNING)
    start = time.perf_counter()
    try:
        record.result = fn()
        record.status = TaskStatus.SUCCESS
    except Exception as e:
        record.status = TaskStatus.FAILURE
        record.error = str(e)
        record.error_type = type(e).__name__
        logger.warning(f"{task_id} failed: {type(e).__name__}: {e}")
    record.duration = time.perf_counter() - start
    return record


def run_tasks(tasks: Sequence[Task], max_workers: int = 1, progress: bool = True,
              desc: str = "items") -> List[TaskResult]:
    """
    Run tasks and return their records in submission order.

    A failing task is recorded and never stops the others.
    """
    show = progress and sys.stderr.isatty()
    if max_workers <= 1 or len(tasks) <= 1:
        return [_execute(tid, fn) for tid, fn in tqdm(tasks, desc=desc, disable=not show)]

    results: Dict[int, TaskResult] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {pool.submit(_execute, tid, fn): i for i, (tid, fn) in enumerate(tasks)}
        for future in tqdm(as_completed(futures), total=len(futures), desc=desc, disable=not show):
            results[futures[future]] = future.result()
    return [results[i] for i in range(len(tasks))]
