"""Event-driven reference simulator for FCFS multi-server queues.

This is the conventional discrete-event formulation: the state is the
waiting line plus per-server busy flags, and departures are contingent
events created as the simulation runs.  It is deliberately simple and
heap-based; it exists to cross-validate the one-pass departure engines and
to serve as the slow baseline in benchmarks.  Events at equal times are
processed schedule-change first, then arrivals, then departures, with
arrivals ordered by customer position.
"""

from __future__ import annotations

import heapq

import numpy as np

from .exceptions import EpochSpanError, InvalidInputError
from .schedule import ServerStepFunction, check_condition
from .workload import QueueResult, WorkloadTable

_CHANGE, _ARRIVAL, _DEPARTURE = 0, 1, 2


def _result(workload: WorkloadTable, d: np.ndarray, p: np.ndarray) -> QueueResult:
    return QueueResult(
        arrivals=workload.arrivals.copy(),
        services=workload.services.copy(),
        departures=d,
        assignments=p,
        ids=workload.ids,
    )


def des_simulate(workload: WorkloadTable, k: int) -> QueueResult:
    """Classic FIFO-line simulation of a fixed pool of k servers.

    An arriving customer seizes the idle server that has been free the
    longest (lowest index on ties); otherwise it joins the line, and each
    departure hands the freed server to the head of the line.
    """
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidInputError("server count k must be a positive integer")
    k = int(k)
    n = len(workload)
    a, s = workload.arrivals, workload.services
    d = np.full(n, np.inf)
    p = np.zeros(n, np.int64)
    free_since = [0.0] * k
    busy = [False] * k

    events: list = []
    for pos, idx in enumerate(np.argsort(a, kind="stable")):
        heapq.heappush(events, (a[idx], _ARRIVAL, pos, int(idx)))
    line: list[int] = []
    head = 0
    seq = n

    def seize(i: int, srv: int, now: float) -> None:
        nonlocal seq
        busy[srv] = True
        d[i] = now + s[i]
        p[i] = srv + 1
        heapq.heappush(events, (d[i], _DEPARTURE, seq, (i, srv)))
        seq += 1

    def longest_idle() -> int | None:
        best, best_free = None, None
        for srv in range(k):
            if not busy[srv] and (best_free is None or free_since[srv] < best_free):
                best, best_free = srv, free_since[srv]
        return best

    while events:
        now, kind, _, payload = heapq.heappop(events)
        if kind == _ARRIVAL:
            srv = longest_idle() if head >= len(line) else None
            if srv is None:
                line.append(payload)
            else:
                seize(payload, srv, now)
        else:
            i, srv = payload
            busy[srv] = False
            free_since[srv] = now
            if head < len(line):
                seize(line[head], longest_idle(), now)
                head += 1
    return _result(workload, d, p)


def des_simulate_stepfun(workload: WorkloadTable, schedule: ServerStepFunction) -> QueueResult:
    """FIFO-line simulation under an open-server count step function.

    Server identities follow the count convention: server k is open on the
    epochs whose count is at least k.  At a change point, newly opened
    servers immediately pull waiting customers; a server due to close takes
    no further work but finishes any in-progress customer.  Only defined
    when no service can span more than one epoch, like the conditional
    engine it validates.
    """
    if not isinstance(schedule, ServerStepFunction):
        raise InvalidInputError("schedule must be a ServerStepFunction")
    if not check_condition(workload.services, schedule):
        raise EpochSpanError(
            "a service time spans more than one schedule epoch; "
            "the step-function oracle is not defined for this workload"
        )
    n = len(workload)
    a, s = workload.arrivals, workload.services
    x, y = schedule.x, schedule.y
    k = schedule.max_servers
    d = np.full(n, np.inf)
    p = np.zeros(n, np.int64)
    is_open = [srv < y[0] for srv in range(k)]
    busy = [False] * k

    events: list = []
    for pos, idx in enumerate(np.argsort(a, kind="stable")):
        heapq.heappush(events, (a[idx], _ARRIVAL, pos, int(idx)))
    for l in range(len(x)):
        heapq.heappush(events, (x[l], _CHANGE, l, int(y[l + 1])))
    line: list[int] = []
    head = 0
    seq = n

    def seize(i: int, srv: int, now: float) -> None:
        nonlocal seq
        busy[srv] = True
        d[i] = now + s[i]
        p[i] = srv + 1
        heapq.heappush(events, (d[i], _DEPARTURE, seq, (i, srv)))
        seq += 1

    def lowest_idle_open() -> int | None:
        for srv in range(k):
            if is_open[srv] and not busy[srv]:
                return srv
        return None

    while events:
        now, kind, _, payload = heapq.heappop(events)
        if kind == _CHANGE:
            for srv in range(k):
                is_open[srv] = srv < payload
            while head < len(line):
                srv = lowest_idle_open()
                if srv is None:
                    break
                seize(line[head], srv, now)
                head += 1
        elif kind == _ARRIVAL:
            srv = lowest_idle_open() if head >= len(line) else None
            if srv is None:
                line.append(payload)
            else:
                seize(payload, srv, now)
        else:
            i, srv = payload
            busy[srv] = False
            if head < len(line):
                nxt = lowest_idle_open()
                if nxt is not None:
                    seize(line[head], nxt, now)
                    head += 1
    return _result(workload, d, p)
