"""Command-line front end: CSV workloads in, departures and summaries out.

Subcommands:
  sample    write a seeded synthetic workload CSV
  simulate  compute departures for a workload under a schedule
  network   run a feed-forward pipeline (tandem / parallel routes / join)
  validate  cross-check the one-pass engine against the event-driven oracle
  bench     time the engines over a range of workload sizes
  mmk       print closed-form M/M/K equilibrium figures

Exit codes: 0 success, 2 invalid input, 3 service spans a schedule epoch,
4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics
import sys
import time
from pathlib import Path

import numpy as np

from .analytic import MmkParameters, mmk_expected_n, mmk_expected_wait, mmk_p, rho
from .core import qdc_fixed, queue_departures
from .des import des_simulate
from .exceptions import EpochSpanError, InvalidInputError
from .metrics import (
    DegenerateWindowError,
    SummaryStats,
    format_summary,
    queue_trajectory,
    summarize,
    system_trajectory,
)
from .network import StageSpec, fork_join, run_pipeline
from .sampling import exponential_workload
from .schedule import schedule_from_json
from .workload import QueueResult, WorkloadTable

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_CONDITION_VIOLATED = 3
EXIT_VALIDATION_FAILED = 4

#: Benchmark workload: two servers at 45% load.
BENCH_SERVERS = 2
BENCH_ARRIVAL_RATE = 1.0
BENCH_SERVICE_RATE = 10.0 / 9.0


def _fmt(value) -> str:
    """Round-trip-safe float rendering (17 significant digits)."""
    return format(float(value), ".17g")


# ---------------------------------------------------------------- CSV I/O


def write_workload_csv(path, workload: WorkloadTable) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "arrival", "service"])
        ids = workload.ids or [str(i + 1) for i in range(len(workload))]
        for cid, a, s in zip(ids, workload.arrivals, workload.services):
            writer.writerow([cid, _fmt(a), _fmt(s)])


def load_table(path, require_service: bool = True):
    """Read a workload CSV into (WorkloadTable, text_columns).

    Needs an ``arrival`` column; ``service`` may be absent when
    ``require_service`` is false (network pipelines name their own service
    columns).  Extra numeric columns land in ``workload.columns``; columns
    that do not parse as numbers (route labels, ...) are returned
    separately as object arrays.  A file with no rows is an empty workload.
    """
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames
        rows = list(reader)
    if not fields or (not rows and "arrival" not in fields):
        return WorkloadTable(np.empty(0), np.empty(0)), {}
    if "arrival" not in fields:
        raise InvalidInputError(f"{path}: missing required column 'arrival'")
    if require_service and "service" not in fields:
        raise InvalidInputError(f"{path}: missing required column 'service'")

    raw = {name: [row[name] for row in rows] for name in fields}
    ids = tuple(raw["id"]) if "id" in raw else None
    numeric, text = {}, {}
    for name in fields:
        if name in ("id", "arrival", "service"):
            continue
        try:
            numeric[name] = np.array([float(v) for v in raw[name]])
        except (TypeError, ValueError):
            text[name] = np.array(raw[name], dtype=object)
    try:
        arrivals = np.array([float(v) for v in raw["arrival"]])
        services = (
            np.array([float(v) for v in raw["service"]])
            if "service" in raw
            else np.zeros(len(rows))
        )
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{path}: non-numeric arrival/service value ({exc})") from exc
    workload = WorkloadTable(arrivals, services, ids=ids, columns=numeric or None)
    return workload, text


RESULT_COLUMNS = ["id", "arrival", "service", "departure", "waiting", "system_time", "server"]


def write_result_csv(path, result: QueueResult, route_labels=None) -> None:
    header = list(RESULT_COLUMNS)
    if route_labels is not None:
        header.insert(1, "route")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        ids = result.ids or [str(i + 1) for i in range(len(result))]
        for i in range(len(result)):
            a, s, d = result.arrivals[i], result.services[i], result.departures[i]
            served = np.isfinite(d)
            row = [
                ids[i],
                _fmt(a),
                _fmt(s),
                _fmt(d),
                _fmt(d - a - s) if served else "inf",
                _fmt(d - a) if served else "inf",
                str(int(result.assignments[i])) if served else "",
            ]
            if route_labels is not None:
                row.insert(1, str(route_labels[i]))
            writer.writerow(row)


def _write_trajectory_csv(path, traj) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["time", "level"])
        for t, lv in zip(traj.times, traj.levels):
            writer.writerow([_fmt(t), int(lv)])


def _write_ecdf_csv(path, result: QueueResult) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["series", "time", "fraction"])
        for series, values in (("arrival", result.arrivals),
                               ("departure", result.departures[result.served])):
            values = np.sort(values)
            n = len(values)
            for i, t in enumerate(values):
                writer.writerow([series, _fmt(t), _fmt((i + 1) / n)])


# ---------------------------------------------------------------- helpers


def _load_schedule(text: str):
    """Parse --schedule: inline JSON if it looks like an object, else a file."""
    if text.lstrip().startswith("{"):
        return schedule_from_json(text)
    return schedule_from_json(Path(text).read_text())


def _zero_summary(result: QueueResult) -> SummaryStats:
    return SummaryStats(
        total_customers=len(result), missed_customers=result.n_missed,
        mean_waiting=0.0, mean_response=0.0, utilization_factor=0.0,
        mean_queue_length=0.0, mean_in_system=0.0,
    )


def _summary(result: QueueResult, schedule) -> SummaryStats:
    try:
        return summarize(result, schedule)
    except DegenerateWindowError:
        return _zero_summary(result)


def _workload_from_args(args) -> WorkloadTable:
    if args.input is not None:
        workload, _ = load_table(args.input)
        return workload
    if args.n is None or args.lam is None or args.mu is None:
        raise InvalidInputError("provide --input or all of --n/--lambda/--mu")
    return exponential_workload(args.n, args.lam, args.mu, args.seed)


# ------------------------------------------------------------- subcommands


def cmd_sample(args) -> int:
    if args.n is None or args.lam is None or args.mu is None:
        raise InvalidInputError("sample needs --n, --lambda and --mu")
    workload = exponential_workload(args.n, args.lam, args.mu, args.seed)
    write_workload_csv(args.output, workload)
    print(f"wrote {len(workload)} customers to {args.output}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    workload = _workload_from_args(args)
    schedule = _load_schedule(args.schedule)
    emit = [tok.strip() for tok in args.emit.split(",") if tok.strip()]
    unknown = set(emit) - {"summary", "table", "trajectories", "ecdf"}
    if unknown:
        raise InvalidInputError(f"unknown --emit token(s): {', '.join(sorted(unknown))}")
    needs_output = set(emit) & {"table", "trajectories", "ecdf"}
    if needs_output and args.output is None:
        raise InvalidInputError(f"--output is required for --emit {','.join(sorted(needs_output))}")

    result = queue_departures(workload, schedule)
    if "table" in emit:
        write_result_csv(args.output, result)
    if "trajectories" in emit:
        stem = Path(args.output)
        _write_trajectory_csv(stem.with_name(stem.stem + "_system.csv"), system_trajectory(result))
        _write_trajectory_csv(stem.with_name(stem.stem + "_queue.csv"), queue_trajectory(result))
    if "ecdf" in emit:
        stem = Path(args.output)
        _write_ecdf_csv(stem.with_name(stem.stem + "_ecdf.csv"), result)
    if "summary" in emit:
        print(format_summary(_summary(result, schedule)))
    return EXIT_OK


def _parse_pipeline(obj, text_columns) -> tuple[list[StageSpec], np.ndarray | None, str | None]:
    if not isinstance(obj, dict):
        raise InvalidInputError("pipeline JSON must be an object")
    stages_json = obj.get("stages")
    if not isinstance(stages_json, list) or not stages_json:
        raise InvalidInputError('pipeline needs a non-empty "stages" array')
    stages = []
    any_parallel = False
    for i, st in enumerate(stages_json):
        where = f"stages[{i}]"
        if not isinstance(st, dict) or "name" not in st:
            raise InvalidInputError(f'{where}: each stage needs a "name"')
        if "service_column" not in st:
            raise InvalidInputError(f'{where}: each stage needs a "service_column"')
        if "schedule" in st:
            schedule = schedule_from_json(st["schedule"])
        elif "schedules" in st:
            if not isinstance(st["schedules"], dict) or not st["schedules"]:
                raise InvalidInputError(f'{where}.schedules must map route labels to schedules')
            schedule = {label: schedule_from_json(sj) for label, sj in st["schedules"].items()}
            any_parallel = True
        else:
            raise InvalidInputError(f'{where}: needs "schedule" or per-route "schedules"')
        stages.append(StageSpec(st["name"], schedule, st["service_column"]))

    routes = None
    route_column = obj.get("route_column")
    if any_parallel and route_column is None:
        raise InvalidInputError('pipeline uses per-route "schedules" but has no "route_column"')
    if route_column is not None:
        if route_column not in text_columns:
            raise InvalidInputError(f'route_column {route_column!r} not found in the workload')
        routes = text_columns[route_column]
    return stages, routes, obj.get("join_column")


def cmd_network(args) -> int:
    workload, text_columns = load_table(args.input, require_service=False)
    pipeline = json.loads(Path(args.pipeline).read_text())
    stages, routes, join_column = _parse_pipeline(pipeline, text_columns)

    results = run_pipeline(workload, stages, routes=routes)
    prefix = Path(args.output)
    for stage, result in zip(stages, results):
        path = prefix.with_name(f"{prefix.stem}_{stage.name}.csv")
        write_result_csv(path, result, route_labels=routes)
        print(f"stage {stage.name}: wrote {path}")

    if join_column is not None:
        join_times = workload.service_column(join_column)
        joined = fork_join(results[-1].departures, join_times)
        path = prefix.with_name(f"{prefix.stem}_joined.csv")
        ids = workload.ids or [str(i + 1) for i in range(len(workload))]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "departure", join_column, "joined"])
            for i in range(len(workload)):
                writer.writerow([ids[i], _fmt(results[-1].departures[i]),
                                 _fmt(join_times[i]), _fmt(joined[i])])
        print(f"join: wrote {path}")

    print("\nMean waiting time by stage" + (" and route:" if routes is not None else ":"))
    for stage, result in zip(stages, results):
        waits = result.departures - result.arrivals - result.services
        groups = [("all", np.ones(len(result), bool))] if routes is None else [
            (label, routes == label) for label in sorted(set(routes))
        ]
        for label, mask in groups:
            picked = waits[mask & result.served]
            mean = float(np.maximum(picked, 0.0).mean()) if len(picked) else 0.0
            print(f"  stage={stage.name} route={label} served={len(picked)} "
                  f"mean_waiting={mean:.6g}")
    return EXIT_OK


def max_departure_discrepancy(workload: WorkloadTable, k: int, engine=qdc_fixed) -> float:
    """Largest relative gap between sorted engine and oracle departures.

    ``engine`` is swappable so tests can verify that a broken engine is
    actually caught.
    """
    if len(workload) == 0:
        return 0.0
    got = np.sort(engine(workload, k).departures)
    want = np.sort(des_simulate(workload, k).departures)
    return float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-12)))


def cmd_validate(args) -> int:
    if args.n is None or args.lam is None or args.mu is None:
        raise InvalidInputError("validate needs --n, --lambda and --mu")
    workload = exponential_workload(args.n, args.lam, args.mu, args.seed)
    worst = max_departure_discrepancy(workload, args.k)
    print(f"n={args.n} k={args.k} max relative departure discrepancy: {worst:.3e}")
    if worst > 1e-8:
        print("FAIL: engines disagree beyond 1e-8", file=sys.stderr)
        return EXIT_VALIDATION_FAILED
    print("PASS")
    return EXIT_OK


def _bench_engines():
    return {
        "qdc": lambda wl: qdc_fixed(wl, BENCH_SERVERS),
        "des-oracle": lambda wl: des_simulate(wl, BENCH_SERVERS),
    }


def run_bench(sizes, reps, engines=("qdc", "des-oracle"), seed=20_260_810):
    """Median wall-clock seconds per (engine, size); generation not timed."""
    available = _bench_engines()
    unknown = [e for e in engines if e not in available]
    if unknown:
        raise InvalidInputError(f"unknown engine(s): {', '.join(unknown)}")
    # warm the compiled kernels so timing measures steady-state throughput
    available["qdc"](exponential_workload(64, BENCH_ARRIVAL_RATE, BENCH_SERVICE_RATE, seed))
    rows = []
    for n in sizes:
        if n < 1:
            raise InvalidInputError("benchmark sizes must be >= 1")
        workload = exponential_workload(n, BENCH_ARRIVAL_RATE, BENCH_SERVICE_RATE, seed + n)
        for name in engines:
            fn = available[name]
            times = []
            for _ in range(reps):
                t0 = time.perf_counter()
                fn(workload)
                times.append(time.perf_counter() - t0)
            rows.append((name, n, statistics.median(times)))
    return rows


def cmd_bench(args) -> int:
    sizes = [int(float(tok)) for tok in args.sizes.split(",") if tok.strip()]
    engines = [tok.strip() for tok in args.engines.split(",") if tok.strip()]
    rows = run_bench(sizes, args.reps, engines)
    print(f"{'engine':<12}{'n':>12}{'median_seconds':>18}")
    for name, n, median in rows:
        print(f"{name:<12}{n:>12}{median:>18.6f}")
    if args.output:
        with open(args.output, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["engine", "n", "median_seconds"])
            for name, n, median in rows:
                writer.writerow([name, n, _fmt(median)])
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_mmk(args) -> int:
    params = MmkParameters(args.lam, args.mu, args.k)
    print(f"rho: {rho(params):.6g}")
    for n in range(args.max_n + 1):
        print(f"P({n}): {mmk_p(params, n):.6g}")
    print(f"E(N): {mmk_expected_n(params):.6g}")
    print(f"E(w): {mmk_expected_wait(params):.6g}")
    return EXIT_OK


# ------------------------------------------------------------------ main


def _add_workload_spec(parser, required=False):
    parser.add_argument("--n", type=int, required=required, help="number of customers")
    parser.add_argument("--lambda", dest="lam", type=float, required=required,
                        help="arrival rate")
    parser.add_argument("--mu", type=float, required=required, help="service rate")
    parser.add_argument("--seed", type=int, default=1, help="RNG seed (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="departq",
        description="Deterministic departure computation for multi-server queues.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="write a seeded synthetic workload CSV")
    _add_workload_spec(p, required=True)
    p.add_argument("--output", required=True, help="workload CSV path")
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("simulate", help="compute departures for a workload")
    p.add_argument("--input", help="workload CSV (id,arrival,service)")
    _add_workload_spec(p)
    p.add_argument("--schedule", required=True,
                   help="schedule JSON (inline or a file path)")
    p.add_argument("--output", help="per-customer result CSV path")
    p.add_argument("--emit", default="summary,table",
                   help="comma list of summary,table,trajectories,ecdf")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("network", help="run a feed-forward pipeline")
    p.add_argument("--input", required=True, help="workload CSV")
    p.add_argument("--pipeline", required=True, help="pipeline JSON file")
    p.add_argument("--output", required=True, help="output prefix for stage CSVs")
    p.set_defaults(fn=cmd_network)

    p = sub.add_parser("validate", help="cross-check engine vs event-driven oracle")
    _add_workload_spec(p)
    p.add_argument("--k", type=int, default=2, help="server count (default 2)")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("bench", help="time the engines across workload sizes")
    p.add_argument("--sizes", required=True, help="comma list of sizes, e.g. 1e5,1e6")
    p.add_argument("--reps", type=int, default=5, help="replications per point")
    p.add_argument("--engines", default="qdc,des-oracle",
                   help="comma list from qdc,des-oracle")
    p.add_argument("--output", help="medians CSV path")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("mmk", help="closed-form M/M/K equilibrium figures")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--mu", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-n", type=int, default=10,
                   help="print P(0..max_n) (default 10)")
    p.set_defaults(fn=cmd_mmk)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except EpochSpanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print('hint: rerun with a {"type": "list", ...} schedule', file=sys.stderr)
        return EXIT_CONDITION_VIOLATED
    except (InvalidInputError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT


if __name__ == "__main__":
    sys.exit(main())
