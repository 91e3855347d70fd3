import math

import numpy as np
import pytest

from agemon import (
    DecisionRule,
    EmptyTimelineError,
    ParameterError,
    SensorState,
    decide,
    empirical_error_rate,
    estimated_state_trajectory,
    map_threshold,
    mismatch_time_by_period,
)
from conftest import manual_timeline

TAU_DEFAULT = 9.158362006503506  # log(0.5/0.005 + 2) / 0.505


class TestThreshold:
    def test_standard_configuration(self):
        assert map_threshold(0.5, 0.005) == pytest.approx(9.16, abs=0.005)
        assert map_threshold(0.5, 0.005) == pytest.approx(TAU_DEFAULT, rel=1e-15)

    def test_unit_log_case(self):
        # lam/nu + 2 = e makes the log 1, so tau = 1/(lam + nu)
        lam = math.e - 2.0
        assert map_threshold(lam, 1.0) == pytest.approx(1.0 / (math.e - 1.0), rel=1e-12)

    @pytest.mark.parametrize("c", [0.1, 2.0, 17.5])
    def test_rate_scaling(self, c):
        # scaling both rates by c scales the threshold by 1/c
        assert map_threshold(0.5 * c, 0.005 * c) == pytest.approx(TAU_DEFAULT / c, rel=1e-12)

    @pytest.mark.parametrize("lam,nu", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0)])
    def test_invalid_rates(self, lam, nu):
        with pytest.raises(ParameterError):
            map_threshold(lam, nu)

    def test_rule_constructors(self):
        rule = DecisionRule.map_rule(0.5, 0.005, 20.0)
        assert rule.tau == TAU_DEFAULT and not rule.degenerate
        assert DecisionRule.map_rule(0.5, 0.005, 5.0).degenerate
        assert DecisionRule.with_threshold(20.0, 20.0).degenerate
        with pytest.raises(ParameterError):
            DecisionRule.with_threshold(-1.0, 20.0)


class TestDecide:
    def test_degenerate_always_working(self):
        rule = DecisionRule.with_threshold(30.0, 20.0)
        for z in (0.0, 5.0, 100.0, 1e9):
            assert decide(z, rule) is SensorState.WORKING

    def test_threshold_crossing(self):
        rule = DecisionRule.with_threshold(TAU_DEFAULT, 20.0)
        assert decide(0.0, rule) is SensorState.WORKING
        assert decide(TAU_DEFAULT, rule) is SensorState.WORKING  # tie -> working
        assert decide(TAU_DEFAULT + 0.001, rule) is SensorState.FAILED

    def test_negative_z(self):
        with pytest.raises(ParameterError):
            decide(-0.1, DecisionRule.with_threshold(1.0, 20.0))


def single_span_timeline(arrivals, T=None, r=50.0):
    """One period whose deliveries arrive at the given times."""
    arrivals = list(arrivals)
    T = T if T is not None else arrivals[-1] + 1.0
    gens = [a - 0.25 for a in arrivals]  # generation times do not matter here
    gens[0] = 0.0
    return manual_timeline([(T, r, gens, arrivals)])


class TestEstimatedTrajectory:
    def test_short_gap_never_flips(self):
        tau = 4.0
        tl = single_span_timeline([0.5, 0.5 + 0.5 * tau], T=0.5 + 0.5 * tau + 0.1, r=tau)
        intervals = list(estimated_state_trajectory(tl, DecisionRule.with_threshold(tau, 100.0)))
        assert all(state is SensorState.WORKING for _, _, state in intervals[:2])

    def test_single_crossing(self):
        tau = 4.0
        tl = single_span_timeline([1.0, 1.0 + 2 * tau], T=1.0 + 2 * tau + 0.1, r=100.0)
        traj = estimated_state_trajectory(tl, DecisionRule.with_threshold(tau, 1000.0))
        intervals = list(traj)
        # working on [1, 1+tau), failed on [1+tau, 1+2tau), working again after
        assert intervals[0] == (1.0, 1.0 + tau, SensorState.WORKING)
        assert intervals[1] == (1.0 + tau, 1.0 + 2 * tau, SensorState.FAILED)
        assert intervals[2][2] is SensorState.WORKING
        assert traj.state_at(1.0 + 1.5 * tau) is SensorState.FAILED

    def test_degenerate_single_interval(self):
        tl = single_span_timeline([1.0, 30.0], T=31.0, r=2.0)
        traj = estimated_state_trajectory(tl, DecisionRule.with_threshold(5.0, 2.0))
        assert len(traj) == 1
        start, end, state = next(iter(traj))
        assert (start, end, state) == (1.0, tl.end_time, SensorState.WORKING)

    def test_contiguous_cover(self, small_timeline):
        rule = DecisionRule.map_rule(0.5, 0.005, 20.0)
        traj = estimated_state_trajectory(small_timeline, rule)
        assert np.array_equal(traj.starts[1:], traj.ends[:-1])
        assert traj.starts[0] == small_timeline.arrival_times[0]
        assert traj.ends[-1] == small_timeline.end_time
        assert np.all(traj.ends > traj.starts)

    def test_empty_timeline(self):
        tl = manual_timeline([(1.0, 2.0, [0.0], [])])
        with pytest.raises(EmptyTimelineError):
            estimated_state_trajectory(tl, DecisionRule.with_threshold(1.0, 2.0))


def naive_error_times(timeline, rule):
    """Reference mismatch accounting: walk the estimated intervals and clip
    each against every true-failure interval."""
    intervals = estimated_state_trajectory(timeline, rule)
    fails, ends = timeline.failure_intervals()
    fp = fn = 0.0
    for lo, hi, state in intervals:
        failed_overlap = sum(
            max(0.0, min(hi, e) - max(lo, f)) for f, e in zip(fails, ends)
        )
        if state is SensorState.FAILED:
            fp += (hi - lo) - failed_overlap
        else:
            fn += failed_overlap
    return fp, fn


class TestEmpiricalError:
    def test_single_period_by_hand(self):
        # last arrival 3.4, failure at 5, recovery ends at 25, tau = 9.16:
        # the estimate turns FAILED at 12.56, so [5, 12.56] is missed outage
        tau = 9.16
        tl = manual_timeline([(5.0, 20.0, [0.0, 1.0, 1.5], [2.0, 2.4, 3.4])])
        breakdown = empirical_error_rate(tl, DecisionRule.with_threshold(tau, 20.0))
        assert breakdown.false_negative_time == pytest.approx(3.4 + tau - 5.0)
        assert breakdown.false_positive_time == pytest.approx(0.0, abs=1e-12)
        assert breakdown.measured_time == pytest.approx(23.0)
        assert breakdown.error_rate == pytest.approx((3.4 + tau - 5.0) / 23.0)

    def test_short_working_gap_no_false_positive(self):
        tau = 5.0
        tl = single_span_timeline([1.0, 4.0], T=10.0, r=100.0)
        breakdown = empirical_error_rate(tl, DecisionRule.with_threshold(tau, 1000.0))
        assert breakdown.reacquisition_fp_time == 0.0
        # the only false positive is the tail of the final gap before failure
        assert breakdown.false_positive_time == pytest.approx(10.0 - 4.0 - tau)

    def test_long_working_gap_contributes_gap_minus_tau(self):
        tau = 2.0
        tl = single_span_timeline([1.0, 9.0], T=9.5, r=100.0)
        breakdown = empirical_error_rate(tl, DecisionRule.with_threshold(tau, 1000.0))
        # gap of 8 inside the working span -> 8 - tau, plus (9.5 - 9 - tau)+ = 0 tail
        assert breakdown.false_positive_time == pytest.approx(8.0 - tau)

    def test_degenerate_rule_counts_exact_outage_time(self):
        tl = manual_timeline([
            (4.0, 2.0, [0.0, 1.0], [1.5, 3.0]),
            (3.0, 2.0, [0.0], [0.5]),
        ])
        rule = DecisionRule.with_threshold(10.0, 2.0)
        assert rule.degenerate
        breakdown = empirical_error_rate(tl, rule)
        in_failure = sum(
            max(0.0, e - max(f, tl.arrival_times[0]))
            for f, e in zip(tl.failure_times, tl.recovery_ends)
        )
        assert breakdown.false_negative_time == in_failure
        assert breakdown.false_positive_time == 0.0
        assert breakdown.error_rate == in_failure / breakdown.measured_time

    def test_matches_naive_interval_walk(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            specs = []
            for _p in range(int(rng.integers(1, 6))):
                T = float(rng.uniform(2.0, 15.0))
                gens = np.cumsum(rng.uniform(0.2, 2.0, size=int(rng.integers(1, 7))))
                gens = np.concatenate(([0.0], gens))
                gens = gens[gens <= T]
                arrs = np.cumsum(rng.uniform(0.2, 2.5, size=gens.size)) + 0.1
                arrs = arrs[arrs <= T]
                specs.append((T, float(rng.uniform(1.0, 8.0)), gens.tolist(), arrs.tolist()))
            if not any(len(s[3]) for s in specs):
                continue
            tl = manual_timeline(specs)
            rule = DecisionRule.with_threshold(float(rng.uniform(0.3, 6.0)), 1e9)
            breakdown = empirical_error_rate(tl, rule)
            fp, fn = naive_error_times(tl, rule)
            assert breakdown.false_positive_time == pytest.approx(fp, abs=1e-10)
            assert breakdown.false_negative_time == pytest.approx(fn, abs=1e-10)

    def test_time_shift_invariance(self):
        # dyadic values, shifted by a power of two: results are bit-identical
        specs = [(4.0, 2.0, [0.0, 1.0], [1.5, 3.0]), (3.0, 2.0, [0.0], [0.5])]
        base = manual_timeline(specs)
        shifted_periods = [p.shifted(2048.0) for p in base.periods]
        from agemon import Timeline
        shifted = Timeline.from_periods(base.params, shifted_periods)
        rule = DecisionRule.with_threshold(1.25, 2.0)
        a = empirical_error_rate(base, rule)
        b = empirical_error_rate(shifted, rule)
        assert a.false_positive_time == b.false_positive_time
        assert a.false_negative_time == b.false_negative_time
        assert a.error_rate == b.error_rate

    def test_reacquisition_split_consistency(self, small_timeline):
        rule = DecisionRule.map_rule(0.5, 0.005, 20.0)
        breakdown = empirical_error_rate(small_timeline, rule)
        assert 0.0 <= breakdown.reacquisition_fp_time <= breakdown.false_positive_time
        assert breakdown.detection_error_rate < breakdown.error_rate
        assert breakdown.error_rate == pytest.approx(
            (breakdown.false_positive_time + breakdown.false_negative_time)
            / breakdown.measured_time
        )
        # with tau < r, z exceeds tau during every reacquisition span, so the
        # reacquisition false-positive time is exactly the r1 time
        from agemon import region_average_aoi
        regions = region_average_aoi(small_timeline)
        assert breakdown.reacquisition_fp_time == pytest.approx(regions.time_r1, rel=1e-12)

    def test_per_period_mismatch_sums_to_total(self, small_timeline):
        rule = DecisionRule.map_rule(0.5, 0.005, 20.0)
        per_period = mismatch_time_by_period(small_timeline, rule)
        breakdown = empirical_error_rate(small_timeline, rule)
        assert per_period.sum() == pytest.approx(
            breakdown.false_positive_time + breakdown.false_negative_time, rel=1e-9
        )
        assert np.all(per_period >= 0)
