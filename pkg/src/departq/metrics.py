"""Summary statistics and time trajectories computed from a queue result."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .schedule import ServerSchedule, open_server_time
from .workload import QueueResult


class DegenerateWindowError(ValueError):
    """No customer was served, so there is no time window to average over."""


@dataclass(frozen=True)
class SummaryStats:
    """Headline performance measures over the window [0, last departure]."""

    total_customers: int
    missed_customers: int
    mean_waiting: float
    mean_response: float
    utilization_factor: float
    mean_queue_length: float
    mean_in_system: float


@dataclass(frozen=True)
class StepTrajectory:
    """A piecewise-constant count over time.

    ``levels[i]`` is the value on the interval starting at ``times[i]``;
    the count is 0 before the first event and after the last one.
    """

    times: np.ndarray
    levels: np.ndarray

    def __len__(self) -> int:
        return len(self.times)


def waiting_times(result: QueueResult) -> np.ndarray:
    """Per-customer waits, departure - arrival - service, in input order.

    Missed customers yield inf.  Values are returned raw: rounding can
    produce waits of a few ulps below zero, which summaries clamp but this
    function does not.
    """
    return result.departures - result.arrivals - result.services


def _event_trajectory(up_times: np.ndarray, down_times: np.ndarray) -> StepTrajectory:
    times = np.concatenate([up_times, down_times])
    deltas = np.concatenate([
        np.ones(len(up_times), np.int64),
        -np.ones(len(down_times), np.int64),
    ])
    order = np.argsort(times, kind="stable")
    times = times[order]
    uniq, first = np.unique(times, return_index=True)
    sums = np.add.reduceat(deltas[order], first) if len(times) else deltas[:0]
    keep = sums != 0
    return StepTrajectory(times=uniq[keep], levels=np.cumsum(sums[keep]))


def system_trajectory(result: QueueResult) -> StepTrajectory:
    """Number of customers in the system (queued or in service) over time.

    Counts customers with arrival <= t < departure; simultaneous arrivals
    and departures are netted and missed customers are excluded.
    """
    served = result.served
    return _event_trajectory(result.arrivals[served], result.departures[served])


def queue_trajectory(result: QueueResult) -> StepTrajectory:
    """Number of customers waiting (arrived, service not yet started) over time."""
    served = result.served
    a = result.arrivals[served]
    starts = result.departures[served] - result.services[served]
    waited = starts > a
    return _event_trajectory(a[waited], starts[waited])


def trajectory_time_average(traj: StepTrajectory, horizon: float) -> float:
    """Time average of a trajectory over [0, horizon]."""
    if horizon <= 0:
        raise DegenerateWindowError("averaging window must have positive length")
    if len(traj) == 0:
        return 0.0
    lo = np.minimum(traj.times, horizon)
    hi = np.minimum(np.append(traj.times[1:], horizon), horizon)
    return float(np.sum(traj.levels * np.maximum(hi - lo, 0.0))) / horizon


def summarize(result: QueueResult, schedule: ServerSchedule) -> SummaryStats:
    """Compute the summary block over the window [0, max finite departure].

    The utilization factor divides total served work by the open-server
    time integral of the schedule over the window, so it accounts for a
    changing number of open servers.  Missed customers are excluded from
    every mean but reported in ``missed_customers``.
    """
    served = result.served
    if not served.any():
        raise DegenerateWindowError("no customer was served")
    horizon = float(result.departures[served].max())
    waits = waiting_times(result)[served]
    responses = result.departures[served] - result.arrivals[served]
    return SummaryStats(
        total_customers=len(result),
        missed_customers=result.n_missed,
        mean_waiting=float(np.maximum(waits, 0.0).mean()),
        mean_response=float(responses.mean()),
        utilization_factor=float(result.services[served].sum())
        / open_server_time(schedule, horizon),
        mean_queue_length=trajectory_time_average(queue_trajectory(result), horizon),
        mean_in_system=trajectory_time_average(system_trajectory(result), horizon),
    )


_SUMMARY_ROWS = (
    ("Total customers", "total_customers"),
    ("Missed customers", "missed_customers"),
    ("Mean waiting time", "mean_waiting"),
    ("Mean response time", "mean_response"),
    ("Utilization factor", "utilization_factor"),
    ("Mean queue length", "mean_queue_length"),
    ("Mean number of customers in system", "mean_in_system"),
)


def format_summary(stats: SummaryStats) -> str:
    """Render the summary block: one label line, one value line, 3 sig figs."""
    lines = []
    for label, attr in _SUMMARY_ROWS:
        value = getattr(stats, attr)
        rendered = str(value) if isinstance(value, int) else format(value, ".3g")
        lines.append(f"{label}:\n {rendered}")
    return "\n".join(lines)
