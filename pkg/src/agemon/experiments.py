"""Parameter sweeps producing rows of analytic and empirical metrics.

Every grid point reuses the same master seed, so sample paths are coupled
across the sweep (common random numbers) and each row's empirical columns
can be reproduced from the recorded seed alone.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .analytics import error_rate_closed_form, mean_aoi_closed_form
from .detector import DecisionRule
from .errors import ParameterError
from .oracle import quadrature_error_rate
from .sim import SimParams, simulate
from .summary import summarize

SWEEP_VARIABLES = ("rho", "expected_T", "threshold")


@dataclass(frozen=True)
class SweepSpec:
    """An inclusive arithmetic grid over one variable, the rest held fixed.

    variable is one of "rho" (service utilization, lam = rho * mu),
    "expected_T" (mean working time, nu = 1 / expected_T) or "threshold"
    (detector threshold on a single shared simulation).
    """

    variable: str
    start: float
    stop: float
    step: float
    fixed: SimParams

    def __post_init__(self) -> None:
        if self.variable not in SWEEP_VARIABLES:
            raise ParameterError(f"unknown sweep variable {self.variable!r}")
        if not self.step > 0:
            raise ParameterError("step must be > 0")
        if not self.start < self.stop:
            raise ParameterError("start must be < stop")
        if self.variable == "rho" and (self.start <= 0 or self.stop >= 1):
            raise ParameterError("swept rho values must stay in (0, 1)")
        if self.variable == "expected_T" and self.start <= 0:
            raise ParameterError("expected_T grid must be positive")
        if self.variable == "threshold" and self.start < 0:
            raise ParameterError("threshold grid must be nonnegative")

    def grid(self) -> np.ndarray:
        n = int(round((self.stop - self.start) / self.step)) + 1
        values = self.start + self.step * np.arange(n)
        return values[values <= self.stop + 1e-9 * self.step]


@dataclass
class ResultRow:
    """One CSV row; empirical fields are None for analytic-only runs."""

    swept_var: str
    swept_value: float
    aoi_analytic: Optional[float] = None
    aoi_empirical: Optional[float] = None
    aoi_ci: Optional[float] = None
    err_analytic: Optional[float] = None
    err_empirical: Optional[float] = None
    err_ci: Optional[float] = None
    fp_rate: Optional[float] = None
    fn_rate: Optional[float] = None
    seed: Optional[int] = None


def _point_row(params: SimParams, var: str, value: float, with_sim: bool, resamples: int) -> ResultRow:
    params.require_stable_queue()
    row = ResultRow(
        swept_var=var,
        swept_value=float(value),
        aoi_analytic=mean_aoi_closed_form(params.lam, params.mu, params.nu, params.r),
        err_analytic=error_rate_closed_form(params.lam, params.nu, params.r),
    )
    if with_sim:
        report = summarize(simulate(params), resamples=resamples)
        row.aoi_empirical = report.aoi_time_average
        row.err_empirical = report.error.error_rate
        row.fp_rate = report.error.fp_rate
        row.fn_rate = report.error.fn_rate
        row.seed = params.master_seed
        if resamples > 0:
            row.aoi_ci = report.aoi_ci_halfwidth
            row.err_ci = report.error_ci_halfwidth
    return row


def run_sweep(spec: SweepSpec, with_sim: bool = True, resamples: int = 1000) -> list[ResultRow]:
    """Evaluate every grid point in grid order."""
    if spec.variable == "threshold":
        return _threshold_sweep(spec, with_sim, resamples)
    rows = []
    for value in spec.grid():
        if spec.variable == "rho":
            params = replace(spec.fixed, lam=float(value) * spec.fixed.mu)
        else:
            params = replace(spec.fixed, nu=1.0 / float(value))
        rows.append(_point_row(params, spec.variable, float(value), with_sim, resamples))
    return rows


def _threshold_sweep(spec: SweepSpec, with_sim: bool, resamples: int) -> list[ResultRow]:
    """One simulation, many rules: the error of each threshold is measured on
    the same timeline, so differences between rows are not simulation noise."""
    params = spec.fixed
    params.require_stable_queue()
    aoi_analytic = mean_aoi_closed_form(params.lam, params.mu, params.nu, params.r)
    timeline = simulate(params) if with_sim else None
    rows = []
    for value in spec.grid():
        rule = DecisionRule.with_threshold(float(value), params.r)
        row = ResultRow(
            swept_var="threshold",
            swept_value=float(value),
            aoi_analytic=aoi_analytic,
            err_analytic=quadrature_error_rate(params.lam, params.nu, params.r, float(value)),
        )
        if timeline is not None:
            report = summarize(timeline, rule, resamples=resamples)
            row.aoi_empirical = report.aoi_time_average
            row.err_empirical = report.error.error_rate
            row.fp_rate = report.error.fp_rate
            row.fn_rate = report.error.fn_rate
            row.seed = params.master_seed
            if resamples > 0:
                row.aoi_ci = report.aoi_ci_halfwidth
                row.err_ci = report.error_ci_halfwidth
        rows.append(row)
    return rows
