"""Workload and result tables for queue departure computation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError

#: Assignment marker for customers that are never served.
MISSED = 0


def _time_vector(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional")
    if arr.size and (not np.all(np.isfinite(arr)) or float(arr.min()) < 0.0):
        raise InvalidInputError(f"{name} must be finite and nonnegative")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class WorkloadTable:
    """Per-customer arrival and service times, kept in input order.

    Arrivals need not be sorted; the engines sort internally and restore
    the original row order in their results.  ``columns`` may carry extra
    per-customer time vectors (additional service stages, bag delivery
    times, ...) addressed by name in network pipelines.
    """

    arrivals: np.ndarray
    services: np.ndarray
    ids: tuple[str, ...] | None = None
    columns: dict[str, np.ndarray] | None = None

    def __post_init__(self):
        object.__setattr__(self, "arrivals", _time_vector(self.arrivals, "arrivals"))
        object.__setattr__(self, "services", _time_vector(self.services, "services"))
        n = len(self.arrivals)
        if len(self.services) != n:
            raise InvalidInputError("arrivals and services must have equal length")
        if self.ids is not None:
            ids = tuple(str(v) for v in self.ids)
            if len(ids) != n:
                raise InvalidInputError("ids must match the number of customers")
            object.__setattr__(self, "ids", ids)
        if self.columns is not None:
            cols = {
                str(name): _time_vector(vec, f"column {name!r}")
                for name, vec in self.columns.items()
            }
            for name, vec in cols.items():
                if len(vec) != n:
                    raise InvalidInputError(f"column {name!r} must match the number of customers")
            object.__setattr__(self, "columns", cols)

    def __len__(self) -> int:
        return len(self.arrivals)

    def service_column(self, name: str | None) -> np.ndarray:
        """Resolve a named service vector; ``None`` means the primary one."""
        if name is None or name == "service":
            return self.services
        if self.columns is None or name not in self.columns:
            raise InvalidInputError(f"workload has no column {name!r}")
        return self.columns[name]


@dataclass(frozen=True)
class QueueResult:
    """Departure times and server assignments, in the input's row order.

    Missed customers (never servable by the schedule) carry
    ``departures == inf`` and ``assignments == MISSED``.
    """

    arrivals: np.ndarray
    services: np.ndarray
    departures: np.ndarray
    assignments: np.ndarray
    ids: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.arrivals)
        for name in ("services", "departures", "assignments"):
            if len(getattr(self, name)) != n:
                raise InvalidInputError(f"{name} length does not match arrivals")
        for name in ("arrivals", "services", "departures", "assignments"):
            getattr(self, name).setflags(write=False)

    def __len__(self) -> int:
        return len(self.arrivals)

    @property
    def served(self) -> np.ndarray:
        """Boolean mask of customers that were actually served."""
        return np.isfinite(self.departures)

    @property
    def n_missed(self) -> int:
        return int(len(self) - np.count_nonzero(self.served))
