"""Closed-form expressions for the detector statistics, its error rate, and
the mean age of information with failures and recoveries."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .detector import map_threshold
from .errors import ParameterError


def _check_rates(lam: float, nu: float) -> None:
    if not lam > 0 or not nu > 0:
        raise ParameterError("lam and nu must be > 0")


def failure_prior(nu: float, r: float) -> float:
    """Long-run fraction of time the sensor is failed: r*nu / (1 + r*nu)."""
    if not nu > 0 or not r > 0:
        raise ParameterError("nu and r must be > 0")
    return r * nu / (1.0 + r * nu)


def pdf_z_given_r2(z, lam: float, nu: float):
    """Density of the gap age during normal operation.

    A gap age of z requires neither a new delivery nor a failure for z
    seconds, so z is exponential with rate lam + nu:
    f(z) = (lam + nu) * exp(-(lam + nu) z).
    """
    _check_rates(lam, nu)
    z = np.asarray(z, dtype=np.float64)
    if np.any(z < 0):
        raise ParameterError("z must be >= 0")
    a = lam + nu
    out = a * np.exp(-a * z)
    return float(out) if out.ndim == 0 else out


def pdf_z_given_r3(z, lam: float, nu: float, r: float):
    """Density of the gap age during an outage.

    During the outage z equals the gap age at the failure plus a uniform
    elapsed time in [0, r]; convolving the two gives
        (1 - exp(-(lam+nu) z)) / r                    for 0 <= z < r,
        exp(-(lam+nu) z) (exp((lam+nu) r) - 1) / r    for z >= r,
    continuous at z = r.
    """
    _check_rates(lam, nu)
    if not r > 0:
        raise ParameterError("r must be > 0")
    z = np.asarray(z, dtype=np.float64)
    if np.any(z < 0):
        raise ParameterError("z must be >= 0")
    a = lam + nu
    out = np.where(
        z < r,
        -np.expm1(-a * z) / r,
        np.exp(-a * z) * np.expm1(a * r) / r,
    )
    return float(out) if out.ndim == 0 else out


def error_rate_closed_form(lam: float, nu: float, r: float) -> float:
    """Long-run error probability of the optimal threshold rule.

    For tau < r:
        E = 1/(1 + r nu) * nu/(lam + 2 nu)
          + nu/(1 + r nu) * (log(lam/nu + 2) + nu/(lam + 2 nu) - 1) / (lam + nu)
    For tau >= r the rule always declares WORKING, so the error is exactly
    the failed-time prior r nu / (1 + r nu).
    """
    _check_rates(lam, nu)
    if not r > 0:
        raise ParameterError("r must be > 0")
    tau = map_threshold(lam, nu)
    if tau >= r:
        return failure_prior(nu, r)
    fp = 1.0 / (1.0 + r * nu) * nu / (lam + 2.0 * nu)
    fn = (
        nu
        / (1.0 + r * nu)
        * (math.log(lam / nu + 2.0) + nu / (lam + 2.0 * nu) - 1.0)
        / (lam + nu)
    )
    return fp + fn


def aoi_mm1(rho: float, mu: float) -> float:
    """Steady-state mean age of a stable M/M/1 FCFS update stream:
    (1/mu) * (1 + 1/rho + rho^2 / (1 - rho))."""
    if not 0 < rho < 1:
        raise ParameterError(f"rho must be in (0, 1), got {rho}")
    if not mu > 0:
        raise ParameterError("mu must be > 0")
    return (1.0 + 1.0 / rho + rho * rho / (1.0 - rho)) / mu


def mean_aoi_closed_form(lam: float, mu: float, nu: float, r: float) -> float:
    """Mean age with failures: the M/M/1 value plus the outage penalty
    (r^2/2 + r/mu + 1/mu^2) * nu / (1 + r nu)."""
    _check_rates(lam, nu)
    if not mu > 0:
        raise ParameterError("mu must be > 0")
    if r < 0:
        raise ParameterError("r must be >= 0")
    base = aoi_mm1(lam / mu, mu)
    return base + (r * r / 2.0 + r / mu + 1.0 / (mu * mu)) * nu / (1.0 + r * nu)


def region_means_closed_form(lam: float, mu: float, nu: float, r: float) -> tuple[float, float, float]:
    """Expected per-region mean ages (reacquisition, normal operation, outage):
    (mm1 + r + 1/(2 mu), mm1, mm1 + r/2)."""
    _check_rates(lam, nu)
    if not mu > 0:
        raise ParameterError("mu must be > 0")
    if r < 0:
        raise ParameterError("r must be >= 0")
    base = aoi_mm1(lam / mu, mu)
    return base + r + 0.5 / mu, base, base + 0.5 * r


@dataclass(frozen=True)
class AnalyticReport:
    """Every closed form evaluated at one parameter point."""

    lam: float
    mu: float
    nu: float
    r: float
    tau: float
    degenerate: bool
    error_rate: float
    aoi_mm1: float
    mean_aoi: float
    prior_s1: float

    def to_dict(self) -> dict:
        return asdict(self)


def analytic_report(lam: float, mu: float, nu: float, r: float) -> AnalyticReport:
    if not r > 0:
        raise ParameterError("r must be > 0")
    tau = map_threshold(lam, nu)
    return AnalyticReport(
        lam=lam,
        mu=mu,
        nu=nu,
        r=r,
        tau=tau,
        degenerate=tau >= r,
        error_rate=error_rate_closed_form(lam, nu, r),
        aoi_mm1=aoi_mm1(lam / mu, mu),
        mean_aoi=mean_aoi_closed_form(lam, mu, nu, r),
        prior_s1=failure_prior(nu, r),
    )
