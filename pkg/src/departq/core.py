"""Departure computation engines.

Every engine maps known per-customer arrival and service times plus a server
configuration to departure times and server assignments, deterministically
and in one pass over the customers sorted by arrival.  The system state is a
vector of next-free times, one per server; nothing about the computation is
random, so sampling of workloads stays fully decoupled from it.
"""

from __future__ import annotations

from bisect import bisect_left

import numpy as np

from . import _kernels
from .exceptions import EpochSpanError, InvalidInputError
from .schedule import (
    ServerAvailability,
    ServerAvailabilityList,
    ServerSchedule,
    ServerStepFunction,
    check_condition,
)
from .workload import QueueResult, WorkloadTable


def _sorted_inputs(workload: WorkloadTable):
    order = np.argsort(workload.arrivals, kind="stable")
    return order, workload.arrivals[order], workload.services[order]


def _restore(workload: WorkloadTable, order, d_sorted, p_sorted) -> QueueResult:
    n = len(workload)
    d = np.empty(n)
    p = np.empty(n, np.int64)
    d[order] = d_sorted
    p[order] = p_sorted
    return QueueResult(
        arrivals=workload.arrivals.copy(),
        services=workload.services.copy(),
        departures=d,
        assignments=p,
        ids=workload.ids,
    )


def lindley_departures(workload: WorkloadTable) -> QueueResult:
    """Single-server FCFS departures: d_i = max(a_i, d_{i-1}) + s_i."""
    order, a, s = _sorted_inputs(workload)
    d = _kernels.lindley_loop(a, s)
    return _restore(workload, order, d, np.ones(len(workload), np.int64))


def qdc_fixed(workload: WorkloadTable, k: int) -> QueueResult:
    """FCFS departures for a fixed pool of k servers.

    Each customer, in arrival order, takes the server with the smallest
    next-free time (lowest index on ties) and departs at
    ``max(arrival, next_free) + service``.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidInputError("server count k must be a positive integer")
    order, a, s = _sorted_inputs(workload)
    d, p = _kernels.fixed_loop(a, s, int(k))
    return _restore(workload, order, d, p)


def qdc_stepfun(workload: WorkloadTable, schedule: ServerStepFunction) -> QueueResult:
    """FCFS departures when the number of open servers follows a step function.

    Valid only when no service time can span more than one schedule epoch
    (see :func:`departq.schedule.check_condition`); longer services need the
    unconditional :func:`qdc_server_list`.  Servers opening at a change
    point become available exactly at that time; customers arriving in a
    zero-server epoch wait for the next one, and customers arriving when no
    server will ever open again are marked missed.
    """
    if not isinstance(schedule, ServerStepFunction):
        raise InvalidInputError("schedule must be a ServerStepFunction")
    if not check_condition(workload.services, schedule):
        raise EpochSpanError(
            "a service time spans more than one schedule epoch "
            f"(max service {float(workload.services.max()):g} >= narrowest interior "
            f"epoch {schedule.min_interior_width():g}); use qdc_server_list with "
            "counts_to_server_list(schedule) instead"
        )
    order, a, s = _sorted_inputs(workload)
    d, p = _kernels.stepfun_loop(a, s, schedule.x, schedule.y)
    return _restore(workload, order, d, p)


def next_available(t: float, x, y) -> float:
    """Earliest time >= t at which a server with availability (x, y) is open.

    Returns t itself when the epoch containing t is open, the start of the
    next open epoch otherwise (scanning across any run of closed epochs),
    and inf when no open epoch remains.
    """
    if t == np.inf:
        return np.inf
    e = bisect_left(x, t)
    if y[e] == 1:
        return float(t)
    for e2 in range(e + 1, len(y)):
        if y[e2] == 1:
            return float(x[e2 - 1])
    return np.inf


def qdc_server_list(workload: WorkloadTable, schedules: ServerAvailabilityList) -> QueueResult:
    """FCFS departures when each server has its own availability schedule.

    For every customer the per-server candidate start time is
    ``next_available(max(next_free, arrival))``; the customer takes the
    server with the earliest candidate (lowest index on ties).  Customers
    whose candidates are all inf are missed.  No restriction on service
    times: a service may run across its server's closed spans, in which
    case the server only becomes usable again at its next open time after
    the service ends.
    """
    if isinstance(schedules, ServerAvailability):
        schedules = ServerAvailabilityList((schedules,))
    if not isinstance(schedules, ServerAvailabilityList):
        raise InvalidInputError("schedules must be a ServerAvailabilityList")
    order, a, s = _sorted_inputs(workload)
    n = len(a)
    nservers = len(schedules)
    xs = [srv.x for srv in schedules.servers]
    ys = [srv.y for srv in schedules.servers]
    b = np.zeros(nservers)
    d = np.empty(n)
    p = np.zeros(n, np.int64)
    for i in range(n):
        ai = a[i]
        best = -1
        cbest = np.inf
        for k in range(nservers):
            t = b[k] if b[k] > ai else ai
            ck = next_available(t, xs[k], ys[k])
            if ck < cbest:
                cbest = ck
                best = k
        if best < 0:
            d[i] = np.inf
            continue
        b[best] = cbest + s[i]
        d[i] = b[best]
        p[i] = best + 1
    return _restore(workload, order, d, p)


def queue_departures(workload: WorkloadTable, schedule: ServerSchedule) -> QueueResult:
    """Run the engine matching the schedule type (fixed count, step function,
    or per-server availability list)."""
    if isinstance(schedule, (int, np.integer)):
        return qdc_fixed(workload, int(schedule))
    if isinstance(schedule, ServerStepFunction):
        return qdc_stepfun(workload, schedule)
    if isinstance(schedule, (ServerAvailabilityList, ServerAvailability)):
        return qdc_server_list(workload, schedule)
    raise InvalidInputError(f"unsupported schedule type {type(schedule).__name__}")
