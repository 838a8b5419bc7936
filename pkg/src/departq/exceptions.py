"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised for malformed workloads, schedules, or parameters."""


class EpochSpanError(ValueError):
    """A service time could span more than one schedule epoch.

    The conditional step-function engine requires every service time to be
    shorter than the narrowest interior epoch of the schedule.  Workloads
    that violate this must be run through ``qdc_server_list`` instead.
    """


class InstabilityError(ValueError):
    """Equilibrium quantities requested for an overloaded queue (rho >= 1)."""
