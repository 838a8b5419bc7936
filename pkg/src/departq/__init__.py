"""departq: deterministic departure computation for multi-server queues.

Given every customer's arrival and service time plus a server schedule,
the engines compute departure times and server assignments in one pass,
orders of magnitude faster than event-driven simulation of the same
system.  An event-driven reference simulator and closed-form M/M/K
results are included as correctness oracles, and feed-forward network
helpers compose queues in tandem, in parallel, and through fork/join.
"""

from .analytic import MmkParameters, mmk_expected_n, mmk_expected_wait, mmk_p, rho
from .core import (
    lindley_departures,
    next_available,
    qdc_fixed,
    qdc_server_list,
    qdc_stepfun,
    queue_departures,
)
from .des import des_simulate, des_simulate_stepfun
from .exceptions import EpochSpanError, InstabilityError, InvalidInputError
from .metrics import (
    DegenerateWindowError,
    StepTrajectory,
    SummaryStats,
    format_summary,
    queue_trajectory,
    summarize,
    system_trajectory,
    trajectory_time_average,
    waiting_times,
)
from .network import StageSpec, fork_join, route_parallel, run_pipeline, tandem
from .sampling import exponential_workload
from .schedule import (
    ServerAvailability,
    ServerAvailabilityList,
    ServerSchedule,
    ServerStepFunction,
    check_condition,
    counts_to_server_list,
    open_count_at,
    open_server_time,
    schedule_from_json,
    schedule_to_json,
)
from .workload import MISSED, QueueResult, WorkloadTable

__version__ = "0.1.0"

__all__ = [
    "MISSED",
    "DegenerateWindowError",
    "EpochSpanError",
    "InstabilityError",
    "InvalidInputError",
    "MmkParameters",
    "QueueResult",
    "ServerAvailability",
    "ServerAvailabilityList",
    "ServerSchedule",
    "ServerStepFunction",
    "StageSpec",
    "StepTrajectory",
    "SummaryStats",
    "WorkloadTable",
    "check_condition",
    "counts_to_server_list",
    "des_simulate",
    "des_simulate_stepfun",
    "exponential_workload",
    "fork_join",
    "format_summary",
    "lindley_departures",
    "mmk_expected_n",
    "mmk_expected_wait",
    "mmk_p",
    "next_available",
    "open_count_at",
    "open_server_time",
    "qdc_fixed",
    "qdc_server_list",
    "qdc_stepfun",
    "queue_departures",
    "queue_trajectory",
    "rho",
    "route_parallel",
    "run_pipeline",
    "schedule_from_json",
    "schedule_to_json",
    "summarize",
    "system_trajectory",
    "tandem",
    "trajectory_time_average",
    "waiting_times",
]
