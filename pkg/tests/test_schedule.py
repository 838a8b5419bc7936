"""Unit tests for schedule types, validation, and conversions."""

import numpy as np
import pytest

from departq import (
    InvalidInputError,
    ServerAvailability,
    ServerAvailabilityList,
    ServerStepFunction,
    check_condition,
    counts_to_server_list,
    open_count_at,
    open_server_time,
    schedule_from_json,
    schedule_to_json,
)


class TestValidation:
    def test_step_function_shape_checks(self):
        with pytest.raises(InvalidInputError):
            ServerStepFunction([10, 5], [1, 2, 3])  # not increasing
        with pytest.raises(InvalidInputError):
            ServerStepFunction([0.0], [1, 2])  # knot must be > 0
        with pytest.raises(InvalidInputError):
            ServerStepFunction([10], [1])  # y too short
        with pytest.raises(InvalidInputError):
            ServerStepFunction([10], [0, 0])  # never any server
        with pytest.raises(InvalidInputError):
            ServerStepFunction([10], [1, -1])  # negative count

    def test_availability_checks(self):
        with pytest.raises(InvalidInputError):
            ServerAvailability([10], [0, 2])  # states must be 0/1
        with pytest.raises(InvalidInputError):
            ServerAvailability([np.inf], [0, 1])

    def test_schedules_are_frozen(self):
        sf = ServerStepFunction([10], [1, 2])
        with pytest.raises(ValueError):
            sf.x[0] = 5.0


class TestCheckCondition:
    def test_fits_inside_interior_epoch(self):
        assert check_condition([1, 2], ServerStepFunction([10, 20], [1, 2, 1]))

    def test_spans_an_epoch(self):
        assert not check_condition([15], ServerStepFunction([10, 20], [1, 2, 1]))

    def test_no_knots_is_always_fine(self):
        assert check_condition([1e9], ServerStepFunction([], [2]))

    def test_single_knot_is_always_fine(self):
        assert check_condition([1e9], ServerStepFunction([10], [1, 2]))

    def test_monotone_in_services(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = np.unique(rng.uniform(1, 50, rng.integers(0, 5)))
            y = np.ones(len(x) + 1, dtype=int)
            sf = ServerStepFunction(x, y)
            s = rng.exponential(5.0, rng.integers(1, 10))
            if check_condition(s, sf):
                assert check_condition(s * rng.uniform(0, 1), sf)


class TestCountsToServerList:
    def test_staffing_profile_expansion(self):
        sal = counts_to_server_list(ServerStepFunction([600, 780], [10, 12, 8]))
        assert len(sal) == 12
        for srv in sal.servers[:8]:  # servers 1..8 always open
            assert len(srv.x) == 0 and srv.y.tolist() == [1]
        for srv in sal.servers[8:10]:  # 9, 10 open until 780
            assert srv.x.tolist() == [780.0] and srv.y.tolist() == [1, 0]
        for srv in sal.servers[10:]:  # 11, 12 open only (600, 780]
            assert srv.x.tolist() == [600.0, 780.0] and srv.y.tolist() == [0, 1, 0]

    def test_constant_count(self):
        sal = counts_to_server_list(ServerStepFunction([], [3]))
        assert len(sal) == 3
        assert all(srv.y.tolist() == [1] for srv in sal.servers)

    def test_delayed_opening(self):
        sal = counts_to_server_list(ServerStepFunction([5], [0, 1]))
        assert len(sal) == 1
        assert sal.servers[0].x.tolist() == [5.0]
        assert sal.servers[0].y.tolist() == [0, 1]

    def test_open_counts_match_at_sampled_times(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            x = np.unique(rng.uniform(1, 100, rng.integers(0, 6)))
            y = rng.integers(0, 5, len(x) + 1)
            if y.max() == 0:
                y[0] = 1
            sf = ServerStepFunction(x, y)
            sal = counts_to_server_list(sf)
            for t in rng.uniform(0, 120, 20):
                assert open_count_at(sal, t) == open_count_at(sf, t)
            for knot in x:  # boundary instants too
                assert open_count_at(sal, knot) == open_count_at(sf, knot)


class TestOpenCountAt:
    def test_change_point_belongs_to_earlier_epoch(self):
        sf = ServerStepFunction([600, 780], [10, 12, 8])
        assert open_count_at(sf, 600) == 10
        assert open_count_at(sf, 700) == 12
        assert open_count_at(sf, 10_000) == 8

    def test_time_zero_is_first_epoch(self):
        assert open_count_at(ServerStepFunction([5], [2, 1]), 0) == 2

    def test_fixed_count(self):
        assert open_count_at(4, 123.0) == 4


class TestOpenServerTime:
    def test_fixed(self):
        assert open_server_time(3, 10.0) == 30.0

    def test_step_function_clamps_to_horizon(self):
        sf = ServerStepFunction([10, 20], [1, 2, 4])
        assert open_server_time(sf, 15.0) == 1 * 10 + 2 * 5
        assert open_server_time(sf, 25.0) == 1 * 10 + 2 * 10 + 4 * 5
        assert open_server_time(sf, 5.0) == 5.0

    def test_list_sums_servers(self):
        sal = ServerAvailabilityList(
            (ServerAvailability([], [1]), ServerAvailability([10], [0, 1]))
        )
        assert open_server_time(sal, 20.0) == 20.0 + 10.0

    def test_matches_stepfun_after_expansion(self):
        sf = ServerStepFunction([600, 780], [10, 12, 8])
        sal = counts_to_server_list(sf)
        for horizon in (0.0, 500.0, 700.0, 2000.0):
            assert open_server_time(sal, horizon) == pytest.approx(
                open_server_time(sf, horizon)
            )


class TestJson:
    def test_round_trips(self):
        for schedule in (
            2,
            ServerStepFunction([600, 780], [10, 12, 8]),
            ServerAvailabilityList(
                (ServerAvailability([5], [0, 1]), ServerAvailability([], [1]))
            ),
        ):
            again = schedule_from_json(schedule_to_json(schedule))
            assert schedule_to_json(again) == schedule_to_json(schedule)

    def test_parses_json_strings(self):
        assert schedule_from_json('{"type": "fixed", "k": 5}') == 5

    def test_rejects_malformed(self):
        for bad in (
            "not json",
            '{"no_type": 1}',
            '{"type": "fixed", "k": 0}',
            '{"type": "fixed", "k": "two"}',
            '{"type": "stepfun", "x": [1]}',
            '{"type": "list", "servers": []}',
            '{"type": "list", "servers": [{"x": [1]}]}',
            '{"type": "warp"}',
        ):
            with pytest.raises(InvalidInputError):
                schedule_from_json(bad)
