"""Failure detection from update timings and its exact empirical error.

The monitor never observes the sensor directly. It tracks the gap age
z(t) = t - (last arrival at or before t) and declares a failure once z
exceeds a threshold. The optimal threshold compares the prior-weighted
densities of z under the two states and collapses to a single constant;
when that constant is at least the recovery duration the rule degenerates
to always declaring the sensor operational.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import EmptyTimelineError, ParameterError
from .sim import Timeline


class SensorState(IntEnum):
    WORKING = 0
    FAILED = 1


def map_threshold(lam: float, nu: float) -> float:
    """Optimal gap-age threshold log(lam/nu + 2) / (lam + nu)."""
    if not lam > 0 or not nu > 0:
        raise ParameterError("lam and nu must be > 0")
    return math.log(lam / nu + 2.0) / (lam + nu)


@dataclass(frozen=True)
class DecisionRule:
    """Threshold rule: declare FAILED while z > tau, WORKING otherwise.

    degenerate is True when tau >= recovery duration, in which case the
    comparison is independent of z and the rule always declares WORKING.
    """

    tau: float
    degenerate: bool

    @classmethod
    def map_rule(cls, lam: float, nu: float, r: float) -> "DecisionRule":
        tau = map_threshold(lam, nu)
        return cls(tau=tau, degenerate=tau >= r)

    @classmethod
    def with_threshold(cls, tau: float, r: float) -> "DecisionRule":
        """A (generally suboptimal) rule with an explicit threshold."""
        if tau < 0:
            raise ParameterError("tau must be >= 0")
        return cls(tau=float(tau), degenerate=tau >= r)


def decide(z: float, rule: DecisionRule) -> SensorState:
    """State estimate for gap age z; the tie z == tau resolves to WORKING."""
    if z < 0:
        raise ParameterError("z must be >= 0")
    if rule.degenerate or z <= rule.tau:
        return SensorState.WORKING
    return SensorState.FAILED


@dataclass(frozen=True, eq=False)
class StateIntervals:
    """Ordered, gap-free intervals of constant estimated state."""

    starts: np.ndarray
    ends: np.ndarray
    states: np.ndarray

    def __len__(self) -> int:
        return int(self.starts.size)

    def __iter__(self):
        for u, v, s in zip(self.starts, self.ends, self.states):
            yield float(u), float(v), SensorState(int(s))

    def state_at(self, t: float) -> SensorState:
        if t < self.starts[0] or t > self.ends[-1]:
            raise ParameterError("t outside the estimated span")
        idx = min(int(np.searchsorted(self.starts, t, side="right")) - 1, len(self) - 1)
        return SensorState(int(self.states[idx]))


def estimated_state_trajectory(timeline: Timeline, rule: DecisionRule) -> StateIntervals:
    """Estimated state from the first arrival to the end of the last period.

    z runs straight through failures and recoveries (the monitor cannot see
    them), so the estimate flips to FAILED at a + tau whenever the next
    arrival is more than tau after a, and back to WORKING on each arrival.
    """
    arrivals = timeline.arrival_times
    if arrivals.size == 0:
        raise EmptyTimelineError("timeline has no deliveries; nothing to estimate")
    end = timeline.end_time
    if rule.degenerate:
        return StateIntervals(
            starts=np.array([arrivals[0]]),
            ends=np.array([end]),
            states=np.array([SensorState.WORKING], dtype=np.int8),
        )
    nxt = np.append(arrivals[1:], end)
    long = (nxt - arrivals) > rule.tau
    n = arrivals.size + int(long.sum())
    starts = np.empty(n)
    ends = np.empty(n)
    states = np.zeros(n, dtype=np.int8)
    pos = np.arange(arrivals.size) + np.concatenate(([0], np.cumsum(long[:-1])))
    starts[pos] = arrivals
    ends[pos] = np.minimum(arrivals + rule.tau, nxt)
    flip = pos[long] + 1
    starts[flip] = arrivals[long] + rule.tau
    ends[flip] = nxt[long]
    states[flip] = SensorState.FAILED
    return StateIntervals(starts=starts, ends=ends, states=states)


@dataclass(frozen=True)
class ErrorBreakdown:
    """Exact mismatch accounting between the estimated and the true state.

    false_positive_time is spent declaring FAILED while the sensor works,
    false_negative_time the other way around. reacquisition_fp_time is the
    part of the false-positive time inside the spans between a period's
    first generation and its first delivery: right after a recovery z is
    still draining the outage, so a false positive there is structural
    whenever tau < r. detection_error_rate scores those spans as correct,
    matching the scope of the closed-form error rate.
    """

    error_rate: float
    false_positive_time: float
    false_negative_time: float
    measured_time: float
    reacquisition_fp_time: float

    @property
    def fp_rate(self) -> float:
        return self.false_positive_time / self.measured_time

    @property
    def fn_rate(self) -> float:
        return self.false_negative_time / self.measured_time

    @property
    def detection_error_rate(self) -> float:
        return (
            self.false_positive_time - self.reacquisition_fp_time + self.false_negative_time
        ) / self.measured_time


def _false_negative_parts(timeline: Timeline, tau: float, m0: float):
    """Per failure interval (clipped to the span): its measured length and the
    time the estimate stays WORKING inside it (z crosses tau at a_last + tau)."""
    arrivals = timeline.arrival_times
    fails, ends = timeline.failure_intervals()
    lo = np.maximum(fails, m0)
    lengths = np.clip(ends - lo, 0.0, None)
    j = np.searchsorted(arrivals, fails, side="right") - 1
    a_last = np.where(j >= 0, arrivals[np.clip(j, 0, None)], -np.inf)
    fn = np.clip(np.minimum(ends, a_last + tau) - lo, 0.0, None)
    return np.where(lengths > 0, lengths, 0.0), np.where(lengths > 0, fn, 0.0)


def empirical_error_rate(timeline: Timeline, rule: DecisionRule) -> ErrorBreakdown:
    """Integrate |estimated - true| exactly over [first arrival, end of run].

    Pure interval arithmetic on the arrival times and failure intervals; no
    time grid is involved.
    """
    arrivals = timeline.arrival_times
    if arrivals.size == 0:
        raise EmptyTimelineError("timeline has no deliveries; nothing to estimate")
    m0 = float(arrivals[0])
    m1 = timeline.end_time
    measured = m1 - m0
    fail_lengths, fn_parts = _false_negative_parts(timeline, rule.tau, m0)
    if rule.degenerate:
        return ErrorBreakdown(
            error_rate=float(fail_lengths.sum()) / measured,
            false_positive_time=0.0,
            false_negative_time=float(fail_lengths.sum()),
            measured_time=measured,
            reacquisition_fp_time=0.0,
        )
    fn = float(fn_parts.sum())
    # total estimated-FAILED time: tail of every arrival gap beyond tau
    gaps = np.append(arrivals[1:], m1) - arrivals
    est_failed = float(np.clip(gaps - rule.tau, 0.0, None).sum())
    true_positive = float(fail_lengths.sum()) - fn
    fp = max(est_failed - true_positive, 0.0)
    # reacquisition spans: period start -> first delivery (or failure when
    # nothing was delivered); no arrival lies inside, so the estimate flips
    # at most once, at a_last + tau
    first = timeline.first_arrival_by_period()
    cut = np.where(timeline.delivered_counts > 0, first, timeline.failure_times)
    lo = np.maximum(timeline.start_times, m0)
    j = np.searchsorted(arrivals, timeline.start_times, side="right") - 1
    a_last = np.where(j >= 0, arrivals[np.clip(j, 0, None)], np.inf)
    reacq = np.clip(cut - np.maximum(lo, a_last + rule.tau), 0.0, None)
    reacq = float(np.where(cut > lo, reacq, 0.0).sum())
    return ErrorBreakdown(
        error_rate=(fp + fn) / measured,
        false_positive_time=fp,
        false_negative_time=fn,
        measured_time=measured,
        reacquisition_fp_time=reacq,
    )


def mismatch_time_by_period(timeline: Timeline, rule: DecisionRule) -> np.ndarray:
    """Mismatch time of each period's clipped slice of the measured span.

    Periods partition [first arrival, end of run], so the entries sum to the
    total mismatch; used for per-period resampling.
    """
    arrivals = timeline.arrival_times
    if arrivals.size == 0:
        raise EmptyTimelineError("timeline has no deliveries; nothing to estimate")
    m0 = float(arrivals[0])
    m1 = timeline.end_time
    lo = np.maximum(timeline.start_times, m0)
    hi = np.minimum(timeline.recovery_ends, m1)
    lo = np.minimum(lo, hi)
    fail_lengths, fn_parts = _false_negative_parts(timeline, rule.tau, m0)
    if rule.degenerate:
        return fail_lengths
    est_failed = _estimated_failed_overlap(arrivals, rule.tau, m1, lo, hi)
    true_positive = fail_lengths - fn_parts
    return np.clip(est_failed - true_positive, 0.0, None) + fn_parts


def _estimated_failed_overlap(arrivals, tau, end, us, vs) -> np.ndarray:
    """Time the estimate is FAILED inside each [us[i], vs[i]).

    The FAILED stretches are [b_k + tau, b_{k+1}) per arrival-gap segment;
    middle segments are accumulated via prefix sums, boundary segments get
    their clipped overlap directly.
    """
    bounds = np.append(arrivals, end)
    seg_failed = np.clip(np.diff(bounds) - tau, 0.0, None)
    prefix = np.concatenate(([0.0], np.cumsum(seg_failed)))
    last = arrivals.size - 1
    j0 = np.clip(np.searchsorted(bounds, us, side="right") - 1, 0, last)
    j1 = np.clip(np.searchsorted(bounds, vs, side="left") - 1, 0, last)

    def edge(j, lo, hi):
        return np.clip(np.minimum(hi, bounds[j + 1]) - np.maximum(lo, bounds[j] + tau), 0.0, None)

    same = j0 == j1
    return np.where(
        same,
        edge(j0, us, vs),
        edge(j0, us, np.inf) + (prefix[j1] - prefix[j0 + 1]) + edge(j1, -np.inf, vs),
    )
