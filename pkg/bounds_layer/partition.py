"""
Deterministic partition runner for the exhaustive searches.

The caller cuts its search forest at a fixed prefix depth (independent of the
worker count) and hands over one job per prefix, in prefix order. Jobs run
either in-process or on a ProcessPoolExecutor; results are merged strictly in
prefix order, so values, witnesses and node counts do not depend on how many
workers were used.

Merge rule for existence searches (``merge_first_found``):
    - the first ``found`` job in prefix order wins; nodes = sum over jobs up to it
    - otherwise any ``indeterminate`` job makes the whole search indeterminate
    - otherwise ``none`` with the total node count
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence

from core.errors import ResourceLimitError

log = logging.getLogger(__name__)

FOUND = "found"
NONE = "none"
INDETERMINATE = "indeterminate"


@dataclass
class SearchBudget:
    """
    :param max_side: largest host side the search may be asked for
    :param node_limit: search nodes per partition; None = unlimited
    :param time_limit: wall-clock seconds for the whole call; None = unlimited
    :param workers: worker processes (1 = in-process)
    """

    max_side: int = 6
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        if self.max_side < 1 or self.workers < 1:
            raise ValueError("max_side and workers must be positive")
        if self.node_limit is not None and self.node_limit < 1:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")

    def check_side(self, side: int, flag: str):
        if side > self.max_side:
            raise ResourceLimitError(flag, f"host side {side} exceeds the configured maximum {self.max_side}")

    def deadline(self) -> Optional[float]:
        return time.time() + self.time_limit if self.time_limit else None

    def to_json(self) -> dict:
        return {"max_side": self.max_side, "node_limit": self.node_limit, "time_limit": self.time_limit}


@dataclass
class PartitionResult:
    status: str
    witness: Any = None
    nodes: int = 0
    value: Optional[int] = None


def _run_sequential(fn: Callable, jobs: Sequence, stop: Callable[[PartitionResult], bool]) -> List[PartitionResult]:
    out = []
    for job in jobs:
        res = fn(job)
        out.append(res)
        if stop(res):
            break
    return out


def _run_pool(fn: Callable, jobs: Sequence, workers: int, stop: Callable[[PartitionResult], bool]) -> List[PartitionResult]:
    out = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(fn, job) for job in jobs]
        for i, fut in enumerate(futures):
            res = fut.result()
            out.append(res)
            if stop(res):
                for later in futures[i + 1:]:
                    later.cancel()
                break
    return out


def run_partitions(
    fn: Callable[[Any], PartitionResult],
    jobs: Sequence,
    workers: int = 1,
    stop: Optional[Callable[[PartitionResult], bool]] = None,
) -> List[PartitionResult]:
    """
    Run ``fn`` over ``jobs`` and return results in job order.

    :param fn: top-level (picklable) function solving one partition
    :param workers: 1 runs in-process; more uses a process pool
    :param stop: predicate; once a result satisfies it, later jobs are skipped
                 (or cancelled). Earlier jobs always complete.
    """
    stop = stop or (lambda _res: False)
    if workers <= 1 or len(jobs) <= 1:
        return _run_sequential(fn, jobs, stop)
    log.debug(f"[PART] {len(jobs)} partitions on {workers} workers")
    return _run_pool(fn, jobs, workers, stop)


def merge_first_found(results: Sequence[PartitionResult], extra_nodes: int = 0) -> PartitionResult:
    nodes = extra_nodes
    indeterminate = False
    for res in results:
        nodes += res.nodes
        if res.status == FOUND:
            return PartitionResult(FOUND, res.witness, nodes)
        if res.status == INDETERMINATE:
            indeterminate = True
    return PartitionResult(INDETERMINATE if indeterminate else NONE, None, nodes)


def merge_best(results: Sequence[PartitionResult], extra_nodes: int = 0) -> PartitionResult:
    """
    Merge for maximisation searches: the largest ``value`` wins, ties go to the
    earliest partition. Status is ``indeterminate`` if any job ran out of budget.
    """
    nodes = extra_nodes
    best: Optional[PartitionResult] = None
    indeterminate = False
    for res in results:
        nodes += res.nodes
        if res.status == INDETERMINATE:
            indeterminate = True
        if res.value is not None and (best is None or res.value > best.value):
            best = res
    if best is None:
        return PartitionResult(INDETERMINATE if indeterminate else NONE, None, nodes)
    return PartitionResult(INDETERMINATE if indeterminate else FOUND, best.witness, nodes, best.value)
