"""Reproducible synthetic workloads with exponential arrivals and services.

Sampling is decoupled from departure computation: these helpers only build
workload tables, which any engine then processes deterministically.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError
from .workload import WorkloadTable


def exponential_workload(n: int, arrival_rate: float, service_rate: float,
                         seed: int) -> WorkloadTable:
    """Workload of n customers with Exp(arrival_rate) inter-arrival gaps
    (cumulative-summed into arrival times) and Exp(service_rate) services.

    Draws are inverse-transform, -log(1 - u) / rate, over the uniform stream
    of a PCG64 generator seeded with ``seed``: the first n uniforms drive
    the inter-arrival gaps, the next n the services.  The same (n, rates,
    seed) therefore reproduces the same table on any platform.
    """
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise InvalidInputError("customer count must be a nonnegative integer")
    if not arrival_rate > 0 or not service_rate > 0:
        raise InvalidInputError("rates must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    gaps = -np.log1p(-rng.random(n)) / arrival_rate
    services = -np.log1p(-rng.random(n)) / service_rate
    return WorkloadTable(arrivals=np.cumsum(gaps), services=services)
