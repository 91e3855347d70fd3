"""One-stop empirical summary of a timeline: age averages, detection error
breakdown, and bootstrap confidence half-widths.

Periods are the iid unit of the model, so resampling is over per-period
(area, mismatch, length) triples rather than raw time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .aoi import RegionAverages, age_trajectory, interval_age_areas, region_average_aoi, time_average_aoi
from .detector import DecisionRule, ErrorBreakdown, empirical_error_rate, mismatch_time_by_period
from .errors import ParameterError
from .sim import Timeline


@dataclass(frozen=True)
class MetricsSummary:
    aoi_time_average: float
    regions: RegionAverages
    error: ErrorBreakdown
    aoi_ci_halfwidth: float
    error_ci_halfwidth: float
    measured_time: float
    periods: int
    seed: int
    unstable_queue: bool

    def to_dict(self) -> dict:
        return {
            "aoi_time_average": self.aoi_time_average,
            "aoi_ci_halfwidth": self.aoi_ci_halfwidth,
            "avg_r1": self.regions.avg_r1,
            "avg_r2": self.regions.avg_r2,
            "avg_r3": self.regions.avg_r3,
            "time_r1": self.regions.time_r1,
            "time_r2": self.regions.time_r2,
            "time_r3": self.regions.time_r3,
            "error_rate": self.error.error_rate,
            "detection_error_rate": self.error.detection_error_rate,
            "error_ci_halfwidth": self.error_ci_halfwidth,
            "fp_rate": self.error.fp_rate,
            "fn_rate": self.error.fn_rate,
            "reacquisition_fp_time": self.error.reacquisition_fp_time,
            "measured_time": self.measured_time,
            "periods": self.periods,
            "seed": self.seed,
            "unstable_queue": self.unstable_queue,
        }


def per_period_statistics(timeline: Timeline, rule: DecisionRule):
    """(age areas, mismatch times, lengths) of each period's slice of the
    measured span. Sums reproduce the whole-run numerators exactly."""
    traj = age_trajectory(timeline)
    lo = np.maximum(timeline.start_times, traj.measurement_start)
    hi = np.minimum(timeline.recovery_ends, traj.measurement_end)
    lo = np.minimum(lo, hi)
    areas = interval_age_areas(timeline, lo, hi)
    mismatch = mismatch_time_by_period(timeline, rule)
    return areas, mismatch, hi - lo


def _bootstrap_halfwidth(rng, numerators, lengths, resamples: int, confidence: float):
    n = lengths.size
    stats = np.empty((resamples, numerators.shape[0]))
    for b in range(resamples):
        idx = rng.integers(0, n, size=n)
        stats[b] = numerators[:, idx].sum(axis=1) / lengths[idx].sum()
    tail = 100.0 * (1.0 - confidence) / 2.0
    lo, hi = np.percentile(stats, [tail, 100.0 - tail], axis=0)
    return (hi - lo) / 2.0


def summarize(
    timeline: Timeline,
    rule: DecisionRule | None = None,
    resamples: int = 1000,
    confidence: float = 0.95,
) -> MetricsSummary:
    """Empirical metrics plus bootstrap half-widths at the given confidence.

    The rule defaults to the optimal threshold for the timeline's own
    parameters. resamples=0 skips the bootstrap (half-widths become NaN).
    The bootstrap stream is derived from the master seed, so summaries are
    reproducible.
    """
    params = timeline.params
    if rule is None:
        params.require_stable_queue()
        rule = DecisionRule.map_rule(params.lam, params.nu, params.r)
    if not 0 < confidence < 1:
        raise ParameterError("confidence must be in (0, 1)")
    traj = age_trajectory(timeline)
    aoi = time_average_aoi(traj)
    regions = region_average_aoi(timeline)
    error = empirical_error_rate(timeline, rule)
    if resamples > 0:
        areas, mismatch, lengths = per_period_statistics(timeline, rule)
        rng = np.random.default_rng(
            np.random.SeedSequence(params.master_seed, spawn_key=(0x0B00, 0))
        )
        aoi_hw, err_hw = _bootstrap_halfwidth(
            rng, np.vstack((areas, mismatch)), lengths, resamples, confidence
        )
    else:
        aoi_hw = err_hw = float("nan")
    return MetricsSummary(
        aoi_time_average=aoi,
        regions=regions,
        error=error,
        aoi_ci_halfwidth=float(aoi_hw),
        error_ci_halfwidth=float(err_hw),
        measured_time=error.measured_time,
        periods=params.periods,
        seed=params.master_seed,
        unstable_queue=timeline.unstable_queue,
    )
