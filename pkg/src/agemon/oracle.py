"""Independent brute-force checks of the closed forms.

The quadrature path integrates the prior-weighted conditional densities
directly (the unsimplified expressions), so agreement with the algebraic
error-rate formula is a genuine cross-check rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .analytics import (
    error_rate_closed_form,
    failure_prior,
    mean_aoi_closed_form,
    pdf_z_given_r2,
    pdf_z_given_r3,
)
from .detector import DecisionRule, map_threshold
from .errors import OracleError, ParameterError
from .sim import SimParams, simulate
from .summary import MetricsSummary, summarize

_QUAD_ABSTOL = 1e-12
_QUAD_MAX_ERR = 1e-10


def _quad(fn, lo, hi, points=None) -> float:
    out = integrate.quad(fn, lo, hi, epsabs=_QUAD_ABSTOL, epsrel=1e-11, limit=300, points=points, full_output=1)
    value, abserr = out[0], out[1]
    if len(out) > 3 or abserr > _QUAD_MAX_ERR:
        raise OracleError(
            f"quadrature on [{lo}, {hi}] did not converge (abserr={abserr:.2e})"
        )
    return value


def quadrature_error_rate(lam: float, nu: float, r: float, tau: float) -> float:
    """Error probability of an arbitrary threshold tau by adaptive quadrature:

        P(working) * integral_tau^inf density(z | working) dz     (false positives)
      + P(failed)  * integral_0^tau  density(z | failed)  dz      (false negatives)
    """
    if not lam > 0 or not nu > 0 or not r > 0:
        raise ParameterError("lam, nu and r must be > 0")
    if tau < 0:
        raise ParameterError("tau must be >= 0")
    p_failed = failure_prior(nu, r)
    fp = _quad(lambda z: pdf_z_given_r2(z, lam, nu), tau, np.inf)
    outage = lambda z: pdf_z_given_r3(z, lam, nu, r)
    if tau == 0:
        fn = 0.0
    elif tau <= r:
        fn = _quad(outage, 0.0, tau)
    else:
        # the density has a kink at z = r; past it, integrate the decaying
        # tail against an infinite limit (stable however large tau is)
        fn = _quad(outage, 0.0, r) + _quad(outage, r, np.inf) - _quad(outage, tau, np.inf)
    return (1.0 - p_failed) * fp + p_failed * fn


def scan_optimal_threshold(lam: float, nu: float, r: float, grid) -> float:
    """Grid argmin of quadrature_error_rate; ties keep the first grid point."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ParameterError("threshold grid must be non-empty")
    if np.any(grid < 0):
        raise ParameterError("thresholds must be >= 0")
    errors = np.array([quadrature_error_rate(lam, nu, r, t) for t in grid])
    return float(grid[int(np.argmin(errors))])


@dataclass(frozen=True)
class CrossCheckReport:
    """Simulation vs closed forms at one parameter point.

    The closed-form error rate models the post-recovery reacquisition span
    as ordinary working time, so err_rel_dev compares it with the
    detection-scope empirical rate; the full-span rate is reported alongside
    and exceeds the detection-scope one by about (1/mu) / (1/nu + r).
    """

    params: SimParams
    tau: float
    degenerate: bool
    aoi_empirical: float
    aoi_analytic: float
    aoi_rel_dev: float
    aoi_ci_halfwidth: float
    err_empirical: float
    err_empirical_full: float
    err_analytic: float
    err_rel_dev: float
    err_ci_halfwidth: float
    fp_rate: float
    fn_rate: float

    def to_dict(self) -> dict:
        d = {
            "lam": self.params.lam,
            "mu": self.params.mu,
            "nu": self.params.nu,
            "r": self.params.r,
            "periods": self.params.periods,
            "seed": self.params.master_seed,
        }
        for name in (
            "tau", "degenerate", "aoi_empirical", "aoi_analytic", "aoi_rel_dev",
            "aoi_ci_halfwidth", "err_empirical", "err_empirical_full",
            "err_analytic", "err_rel_dev", "err_ci_halfwidth", "fp_rate", "fn_rate",
        ):
            d[name] = getattr(self, name)
        return d


def monte_carlo_cross_check(
    params: SimParams,
    rule: DecisionRule | None = None,
    resamples: int = 1000,
) -> CrossCheckReport:
    """Simulate, measure, and compare against the closed forms.

    Needs at least 10^4 periods; with fewer the Monte Carlo noise swamps the
    deviations this report is meant to expose.
    """
    if params.periods < 10_000:
        raise ParameterError("cross checks need periods >= 10000")
    params.require_stable_queue()
    if rule is None:
        rule = DecisionRule.map_rule(params.lam, params.nu, params.r)
    timeline = simulate(params)
    report: MetricsSummary = summarize(timeline, rule, resamples=resamples)
    aoi_analytic = mean_aoi_closed_form(params.lam, params.mu, params.nu, params.r)
    err_analytic = (
        error_rate_closed_form(params.lam, params.nu, params.r)
        if rule.tau == map_threshold(params.lam, params.nu)
        else quadrature_error_rate(params.lam, params.nu, params.r, rule.tau)
    )
    err_emp = report.error.detection_error_rate
    return CrossCheckReport(
        params=params,
        tau=rule.tau,
        degenerate=rule.degenerate,
        aoi_empirical=report.aoi_time_average,
        aoi_analytic=aoi_analytic,
        aoi_rel_dev=report.aoi_time_average / aoi_analytic - 1.0,
        aoi_ci_halfwidth=report.aoi_ci_halfwidth,
        err_empirical=err_emp,
        err_empirical_full=report.error.error_rate,
        err_analytic=err_analytic,
        err_rel_dev=err_emp / err_analytic - 1.0,
        err_ci_halfwidth=report.error_ci_halfwidth,
        fp_rate=report.error.fp_rate,
        fn_rate=report.error.fn_rate,
    )
