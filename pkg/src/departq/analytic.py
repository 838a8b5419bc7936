"""Closed-form equilibrium results for M/M/K queues.

These serve as statistical oracles for simulated workloads: a long
exponential workload pushed through the departure engines must reproduce
the equilibrium utilization, waiting time, and occupancy distribution.
Factorial terms are evaluated in log space so large server counts do not
overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exceptions import InstabilityError, InvalidInputError


@dataclass(frozen=True)
class MmkParameters:
    """Arrival rate, per-server service rate, and server count."""

    lam: float
    mu: float
    k: int

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise InvalidInputError("arrival rate must be positive and finite")
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise InvalidInputError("service rate must be positive and finite")
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidInputError("server count must be a positive integer")


def rho(params: MmkParameters) -> float:
    """Traffic intensity lambda / (K mu); equilibrium exists when < 1."""
    return params.lam / (params.k * params.mu)


def _require_stable(params: MmkParameters) -> float:
    r = rho(params)
    if r >= 1.0:
        raise InstabilityError(f"queue is unstable: rho = {r:g} >= 1")
    return r


def _log_p0(params: MmkParameters) -> float:
    r = _require_stable(params)
    log_kr = math.log(params.lam / params.mu)  # log(K * rho)
    k = params.k
    terms = [i * log_kr - math.lgamma(i + 1) for i in range(k)]
    terms.append(k * log_kr - math.lgamma(k + 1) - math.log1p(-r))
    m = max(terms)
    return -(m + math.log(math.fsum(math.exp(t - m) for t in terms)))


def mmk_p(params: MmkParameters, n_customers: int) -> float:
    """Equilibrium probability of exactly ``n_customers`` in the system."""
    if not isinstance(n_customers, int) or n_customers < 0:
        raise InvalidInputError("customer count must be a nonnegative integer")
    log_p0 = _log_p0(params)
    log_kr = math.log(params.lam / params.mu)
    n, k = n_customers, params.k
    if n <= k:
        log_p = log_p0 + n * log_kr - math.lgamma(n + 1)
    else:
        log_p = log_p0 + n * log_kr - math.lgamma(k + 1) - (n - k) * math.log(k)
    return math.exp(log_p)


def _erlang_term(params: MmkParameters) -> float:
    """(K rho)^K P(0) / K!, the shared factor in E(N) and E(w)."""
    log_kr = math.log(params.lam / params.mu)
    return math.exp(params.k * log_kr - math.lgamma(params.k + 1) + _log_p0(params))


def mmk_expected_n(params: MmkParameters) -> float:
    """Equilibrium expected number of customers in the system."""
    r = _require_stable(params)
    return params.k * r + r * _erlang_term(params) / (1.0 - r) ** 2


def mmk_expected_wait(params: MmkParameters) -> float:
    """Equilibrium expected time spent waiting for a server."""
    r = _require_stable(params)
    return _erlang_term(params) / (params.k * params.mu * (1.0 - r) ** 2)
