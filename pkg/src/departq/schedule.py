"""Server schedules: fixed counts, count step functions, per-server availability.

Epoch convention: a step function with change points ``x`` (length L) and
values ``y`` (length L+1) is constant on the half-open intervals
``(0, x[0]], (x[0], x[1]], ..., (x[L-1], inf)``; a time exactly at a change
point belongs to the earlier epoch, and t = 0 belongs to the first one.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import InvalidInputError


def _knot_vector(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional")
    if arr.size:
        if not np.all(np.isfinite(arr)) or float(arr.min()) <= 0.0:
            raise InvalidInputError(f"{name} entries must be finite and positive")
        if np.any(np.diff(arr) <= 0.0):
            raise InvalidInputError(f"{name} entries must be strictly increasing")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ServerStepFunction:
    """Open-server count over time: counts ``y`` between change points ``x``."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _knot_vector(self.x, "x"))
        y = np.array(self.y, dtype=np.int64)
        if y.ndim != 1 or len(y) != len(self.x) + 1:
            raise InvalidInputError("y must hold one count per epoch (len(x) + 1)")
        if y.size == 0 or y.min() < 0:
            raise InvalidInputError("server counts must be nonnegative")
        if y.max() < 1:
            raise InvalidInputError("at least one epoch must have an open server")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)

    @property
    def max_servers(self) -> int:
        return int(self.y.max())

    def min_interior_width(self) -> float:
        """Narrowest epoch strictly between the first and last change point."""
        if len(self.x) < 2:
            return np.inf
        return float(np.diff(self.x).min())


@dataclass(frozen=True)
class ServerAvailability:
    """One server's open/closed state over time (y entries are 0 or 1)."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", _knot_vector(self.x, "x"))
        y = np.array(self.y, dtype=np.int64)
        if y.ndim != 1 or len(y) != len(self.x) + 1:
            raise InvalidInputError("y must hold one state per epoch (len(x) + 1)")
        if y.size and not np.all((y == 0) | (y == 1)):
            raise InvalidInputError("availability states must be 0 (closed) or 1 (open)")
        y.setflags(write=False)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class ServerAvailabilityList:
    """Per-server availability schedules; server k is ``servers[k - 1]``."""

    servers: tuple[ServerAvailability, ...]

    def __post_init__(self):
        servers = tuple(self.servers)
        if not servers:
            raise InvalidInputError("at least one server schedule is required")
        if not all(isinstance(s, ServerAvailability) for s in servers):
            raise InvalidInputError("servers must be ServerAvailability entries")
        object.__setattr__(self, "servers", servers)

    def __len__(self) -> int:
        return len(self.servers)


#: Anything the engines accept as a server configuration.
ServerSchedule = Union[int, ServerStepFunction, ServerAvailabilityList]


def check_condition(services, schedule: ServerStepFunction) -> bool:
    """True when no service time can span more than one epoch of ``schedule``.

    This holds exactly when ``max(services)`` is shorter than the narrowest
    interior epoch; the unbounded final epoch imposes no bound, so schedules
    with fewer than two change points always pass.
    """
    s = np.asarray(services, dtype=np.float64)
    if s.size == 0:
        return True
    return float(s.max()) < schedule.min_interior_width()


def open_count_at(schedule: ServerSchedule, t: float) -> int:
    """Number of open servers at time t (t >= 0)."""
    if isinstance(schedule, (int, np.integer)):
        return int(schedule)
    if isinstance(schedule, ServerStepFunction):
        return int(schedule.y[bisect_left(schedule.x, t)])
    if isinstance(schedule, ServerAvailabilityList):
        return sum(int(s.y[bisect_left(s.x, t)]) for s in schedule.servers)
    raise InvalidInputError(f"unsupported schedule type {type(schedule).__name__}")


def counts_to_server_list(schedule: ServerStepFunction) -> ServerAvailabilityList:
    """Expand a count step function into per-server availability schedules.

    Openness goes to the lowest-numbered servers first, so server k is open
    exactly on the epochs with a count of at least k; adjacent epochs with
    the same state are merged.
    """
    servers = []
    for k in range(1, schedule.max_servers + 1):
        states = (schedule.y >= k).astype(np.int64)
        xs = [float(schedule.x[e]) for e in range(len(schedule.x)) if states[e + 1] != states[e]]
        ys = [int(states[0])]
        for e in range(len(schedule.x)):
            if states[e + 1] != ys[-1]:
                ys.append(int(states[e + 1]))
        servers.append(ServerAvailability(np.asarray(xs), np.asarray(ys)))
    return ServerAvailabilityList(tuple(servers))


def _step_integral(x: np.ndarray, y: np.ndarray, horizon: float) -> float:
    bounds = np.concatenate([[0.0], x, [np.inf]])
    lo = np.minimum(bounds[:-1], horizon)
    hi = np.minimum(bounds[1:], horizon)
    return float(np.sum(y * np.maximum(hi - lo, 0.0)))


def open_server_time(schedule: ServerSchedule, horizon: float) -> float:
    """Integral of the open-server count over [0, horizon] (server-hours)."""
    if horizon < 0:
        raise InvalidInputError("horizon must be nonnegative")
    if isinstance(schedule, (int, np.integer)):
        return float(schedule) * horizon
    if isinstance(schedule, ServerStepFunction):
        return _step_integral(schedule.x, schedule.y, horizon)
    if isinstance(schedule, ServerAvailabilityList):
        return sum(_step_integral(s.x, s.y, horizon) for s in schedule.servers)
    raise InvalidInputError(f"unsupported schedule type {type(schedule).__name__}")


def schedule_from_json(obj) -> ServerSchedule:
    """Build a schedule from its JSON form (a dict or a JSON string).

    Accepted shapes::

        {"type": "fixed", "k": 2}
        {"type": "stepfun", "x": [600, 780], "y": [10, 12, 8]}
        {"type": "list", "servers": [{"x": [5], "y": [0, 1]}, ...]}
    """
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"schedule is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "type" not in obj:
        raise InvalidInputError('schedule JSON must be an object with a "type" field')
    kind = obj["type"]
    if kind == "fixed":
        k = obj.get("k")
        if not isinstance(k, int) or k < 1:
            raise InvalidInputError('fixed schedule needs a positive integer "k"')
        return k
    if kind == "stepfun":
        if "x" not in obj or "y" not in obj:
            raise InvalidInputError('stepfun schedule needs "x" and "y" arrays')
        return ServerStepFunction(obj["x"], obj["y"])
    if kind == "list":
        servers = obj.get("servers")
        if not isinstance(servers, list) or not servers:
            raise InvalidInputError('list schedule needs a non-empty "servers" array')
        entries = []
        for i, entry in enumerate(servers):
            if not isinstance(entry, dict) or "x" not in entry or "y" not in entry:
                raise InvalidInputError(f'servers[{i}] needs "x" and "y" arrays')
            entries.append(ServerAvailability(entry["x"], entry["y"]))
        return ServerAvailabilityList(tuple(entries))
    raise InvalidInputError(f'schedule type must be "fixed", "stepfun" or "list", got {kind!r}')


def schedule_to_json(schedule: ServerSchedule) -> dict:
    """Inverse of :func:`schedule_from_json`."""
    if isinstance(schedule, (int, np.integer)):
        return {"type": "fixed", "k": int(schedule)}
    if isinstance(schedule, ServerStepFunction):
        return {"type": "stepfun", "x": schedule.x.tolist(), "y": schedule.y.tolist()}
    if isinstance(schedule, ServerAvailabilityList):
        return {
            "type": "list",
            "servers": [{"x": s.x.tolist(), "y": s.y.tolist()} for s in schedule.servers],
        }
    raise InvalidInputError(f"unsupported schedule type {type(schedule).__name__}")
