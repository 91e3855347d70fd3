"""Exact age-of-information metrics over a simulated timeline.

The instantaneous age is the time since the generation of the freshest
delivered update: a sawtooth that climbs with slope 1 and drops to the
system time of each update on its arrival. All averages here integrate the
piecewise-linear trajectory in closed form per segment (trapezoids); there
is no time discretization anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyTimelineError, ParameterError
from .sim import Timeline


@dataclass(frozen=True, eq=False)
class AoiTrajectory:
    """Piecewise-linear age: slope 1 between breakpoints, right-continuous
    jumps at breakpoints. times[0] must equal measurement_start."""

    times: np.ndarray
    ages: np.ndarray
    measurement_start: float
    measurement_end: float

    def age_at(self, t):
        """Age at time t (scalar or array); t must lie in the measured span."""
        t = np.asarray(t, dtype=np.float64)
        if np.any(t < self.measurement_start) or np.any(t > self.measurement_end):
            raise ParameterError("t outside the measured span")
        idx = np.searchsorted(self.times, t, side="right") - 1
        out = self.ages[idx] + (t - self.times[idx])
        return float(out) if out.ndim == 0 else out

    @property
    def breakpoints(self) -> np.ndarray:
        return np.column_stack((self.times, self.ages))


def age_trajectory(timeline: Timeline) -> AoiTrajectory:
    """Age trajectory of a timeline, measured from the first arrival (the age
    is undefined before anything was delivered) to the end of the last period."""
    if timeline.delivery_count == 0:
        raise EmptyTimelineError("timeline has no deliveries; the age is undefined")
    arrivals = timeline.arrival_times
    return AoiTrajectory(
        times=arrivals,
        ages=arrivals - timeline.arrival_generations,
        measurement_start=float(arrivals[0]),
        measurement_end=timeline.end_time,
    )


def time_average_aoi(traj: AoiTrajectory) -> float:
    """Exact time average: each slope-1 segment of length L starting at age y
    contributes the trapezoid area L*(y + L/2)."""
    span = traj.measurement_end - traj.measurement_start
    if not span > 0.0:
        raise EmptyTimelineError("zero-length measurement span has no average")
    seg = np.append(traj.times[1:], traj.measurement_end) - traj.times
    area = float(np.sum(seg * (traj.ages + 0.5 * seg)))
    return area / span


def interval_age_areas(timeline: Timeline, starts, ends) -> np.ndarray:
    """Exact integrals of the age over each [starts[i], ends[i]).

    Intervals must lie inside the measured span (callers clip first). The
    slice [lo, hi) of the arrival segment starting at age y contributes the
    trapezoid (hi - lo) * (y + (lo - segment start) + (hi - lo)/2); whole
    segments in the middle of a span come from a prefix sum of segment
    areas. Everything is computed from reset ages rather than absolute
    generation times, which stays well conditioned on long runs.
    """
    arrivals = timeline.arrival_times
    if arrivals.size == 0:
        raise EmptyTimelineError("timeline has no deliveries")
    us = np.asarray(starts, dtype=np.float64)
    vs = np.asarray(ends, dtype=np.float64)
    reset_ages = arrivals - timeline.arrival_generations
    bounds = np.append(arrivals, timeline.end_time)
    seg_len = np.diff(bounds)
    prefix = np.concatenate(([0.0], np.cumsum(seg_len * (reset_ages + 0.5 * seg_len))))
    j0 = np.clip(np.searchsorted(bounds, us, side="right") - 1, 0, arrivals.size - 1)
    j1 = np.clip(np.searchsorted(bounds, vs, side="left") - 1, 0, arrivals.size - 1)

    def part(j, lo, hi):
        length = hi - lo
        return length * (reset_ages[j] + (lo - bounds[j]) + 0.5 * length)

    return np.where(
        j0 == j1,
        part(j0, us, vs),
        part(j0, us, bounds[j0 + 1]) + (prefix[j1] - prefix[j0 + 1]) + part(j1, bounds[j1], vs),
    )


@dataclass(frozen=True)
class RegionAverages:
    """Time-averaged age and total duration per region of the period cycle:

    r1: from the first post-recovery generation until its delivery (for
        periods with no delivery, the whole pre-failure span),
    r2: normal operation, from the first delivery until the failure,
    r3: the outage, from the failure until recovery completes.

    Averages are time-weighted across the whole run; a region nobody entered
    has zero time and a NaN average.
    """

    avg_r1: float
    avg_r2: float
    avg_r3: float
    time_r1: float
    time_r2: float
    time_r3: float

    @property
    def total_time(self) -> float:
        return self.time_r1 + self.time_r2 + self.time_r3


def region_average_aoi(timeline: Timeline) -> RegionAverages:
    """Per-region time-averaged age over the measured span."""
    traj = age_trajectory(timeline)
    m0, m1 = traj.measurement_start, traj.measurement_end
    first = timeline.first_arrival_by_period()
    has = timeline.delivered_counts > 0
    spans = {
        # (lo, hi) per period; no-delivery periods fold their pre-failure
        # span into r1 and skip r2 entirely
        1: (timeline.start_times, np.where(has, first, timeline.failure_times)),
        2: (np.where(has, first, timeline.failure_times), timeline.failure_times),
        3: (timeline.failure_times, timeline.recovery_ends),
    }
    areas = {}
    times = {}
    for region, (lo, hi) in spans.items():
        lo = np.clip(lo, m0, m1)
        hi = np.clip(hi, m0, m1)
        keep = hi > lo
        areas[region] = float(np.sum(interval_age_areas(timeline, lo[keep], hi[keep])))
        times[region] = float(np.sum(hi[keep] - lo[keep]))
    avg = {k: areas[k] / times[k] if times[k] > 0 else float("nan") for k in spans}
    return RegionAverages(
        avg_r1=avg[1], avg_r2=avg[2], avg_r3=avg[3],
        time_r1=times[1], time_r2=times[2], time_r3=times[3],
    )
