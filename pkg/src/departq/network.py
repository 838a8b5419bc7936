"""Feed-forward composition of queueing stages.

Stages can be chained in tandem (each stage's departures are the next
stage's arrivals), run in parallel over a predetermined per-customer route
label, and merged with a fork/join (a job departs a join when its slowest
branch does).  Only feed-forward topologies are supported: every stage's
arrivals are fully determined before it runs, which is what lets the
one-pass engines compute them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import queue_departures
from .exceptions import InvalidInputError
from .schedule import ServerSchedule
from .workload import MISSED, QueueResult, WorkloadTable


@dataclass(frozen=True)
class StageSpec:
    """One pipeline stage: a name, a server schedule, and the workload column
    holding this stage's per-customer service times (None for the primary
    services vector).  ``schedule`` may instead be a dict mapping route
    labels to schedules, making the stage a set of parallel queues."""

    name: str
    schedule: ServerSchedule | dict[str, ServerSchedule]
    service_column: str | None = None


def _run_with_missing(arrivals: np.ndarray, services: np.ndarray,
                      schedule: ServerSchedule) -> QueueResult:
    """Run a queue over rows with finite arrivals; others stay missed."""
    alive = np.isfinite(arrivals)
    n = len(arrivals)
    d = np.full(n, np.inf)
    p = np.full(n, MISSED, np.int64)
    if alive.any():
        sub = queue_departures(WorkloadTable(arrivals[alive], services[alive]), schedule)
        d[alive] = sub.departures
        p[alive] = sub.assignments
    return QueueResult(arrivals=arrivals.copy(), services=services.copy(),
                       departures=d, assignments=p)


def tandem(workload: WorkloadTable, stages: list[StageSpec]) -> list[QueueResult]:
    """Run an ordered chain of stages; returns one result per stage.

    The first stage consumes the workload arrivals; stage j+1's arrivals
    are stage j's departures.  A customer missed at any stage stays missed
    through all later stages.
    """
    if not stages:
        raise InvalidInputError("at least one stage is required")
    names = [st.name for st in stages]
    if len(set(names)) != len(names):
        raise InvalidInputError("stage names must be unique")
    results = []
    arrivals = workload.arrivals
    for stage in stages:
        services = workload.service_column(stage.service_column)
        res = _run_with_missing(arrivals, services, stage.schedule)
        results.append(res)
        arrivals = res.departures
    return results


def route_parallel(workload: WorkloadTable, routes,
                   branch_schedules: dict[str, ServerSchedule]) -> QueueResult:
    """Run independent queues per route label and reassemble in input order.

    ``routes`` assigns every customer to exactly one branch; each label must
    have a schedule in ``branch_schedules``.
    """
    routes = np.asarray([str(r) for r in routes], dtype=object)
    n = len(workload)
    if len(routes) != n:
        raise InvalidInputError("routes must assign a label to every customer")
    unknown = sorted(set(routes) - set(branch_schedules))
    if unknown:
        raise InvalidInputError(f"no schedule for route label(s): {', '.join(unknown)}")
    d = np.full(n, np.inf)
    p = np.full(n, MISSED, np.int64)
    for label, schedule in branch_schedules.items():
        mask = routes == label
        if not mask.any():
            continue
        sub = queue_departures(
            WorkloadTable(workload.arrivals[mask], workload.services[mask]), schedule
        )
        d[mask] = sub.departures
        p[mask] = sub.assignments
    return QueueResult(
        arrivals=workload.arrivals.copy(),
        services=workload.services.copy(),
        departures=d,
        assignments=p,
        ids=workload.ids,
    )


def run_pipeline(workload: WorkloadTable, stages: list[StageSpec],
                 routes=None) -> list[QueueResult]:
    """Run a chain of stages, any of which may be a parallel route stage.

    Like :func:`tandem` but a stage whose schedule is a dict of per-route
    schedules partitions the customers by ``routes`` label for that stage.
    Missed customers propagate through all later stages.
    """
    if not stages:
        raise InvalidInputError("at least one stage is required")
    names = [st.name for st in stages]
    if len(set(names)) != len(names):
        raise InvalidInputError("stage names must be unique")
    if routes is not None:
        routes = np.asarray([str(r) for r in routes], dtype=object)
        if len(routes) != len(workload):
            raise InvalidInputError("routes must assign a label to every customer")
    results = []
    arrivals = workload.arrivals
    for stage in stages:
        services = workload.service_column(stage.service_column)
        if isinstance(stage.schedule, dict):
            if routes is None:
                raise InvalidInputError(
                    f"stage {stage.name!r} has per-route schedules but no routes were given"
                )
            res = _parallel_with_missing(arrivals, services, routes, stage.schedule)
        else:
            res = _run_with_missing(arrivals, services, stage.schedule)
        results.append(res)
        arrivals = res.departures
    return results


def _parallel_with_missing(arrivals, services, routes, branch_schedules) -> QueueResult:
    alive = np.isfinite(arrivals)
    n = len(arrivals)
    d = np.full(n, np.inf)
    p = np.full(n, MISSED, np.int64)
    if alive.any():
        sub = route_parallel(
            WorkloadTable(arrivals[alive], services[alive]),
            routes[alive],
            branch_schedules,
        )
        d[alive] = sub.departures
        p[alive] = sub.assignments
    return QueueResult(arrivals=arrivals.copy(), services=services.copy(),
                       departures=d, assignments=p)


def fork_join(departures_a, departures_b) -> np.ndarray:
    """Join two branches of forked subjobs: the elementwise later departure.

    A job leaves the join only when both subjobs have; a missed subjob
    (inf) makes the joined job missed.  Joins of more than two branches
    are folds of this binary operation.
    """
    a = np.asarray(departures_a, dtype=np.float64)
    b = np.asarray(departures_b, dtype=np.float64)
    if a.shape != b.shape:
        raise InvalidInputError(
            f"fork_join inputs must have equal length, got {a.shape} and {b.shape}"
        )
    return np.maximum(a, b)
