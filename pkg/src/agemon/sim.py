"""Event-trace generation for a sensor that streams updates through an
M/M/1 FCFS queue and intermittently fails.

A run is a sequence of periods on one absolute clock. Each period starts
with the first update generated after the previous recovery and contains:

* a working span of random length T ~ Exp(nu) in which updates are
  generated with Exp(lam) gaps and served FCFS with Exp(mu) service times,
* a deterministic outage of r seconds starting at the failure. Updates
  still queued or in service at the failure are discarded; updates whose
  service completed by then were delivered to the monitor.

The next period starts exactly at recovery completion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ParameterError, SimulationLimitError

# Generations allowed per period before aborting; guards pathological
# parameters (e.g. enormous lam * T). Hitting it is an error, never a
# silent truncation.
EVENT_CAP = 10**9


@dataclass(frozen=True)
class SimParams:
    """Model parameters for one run.

    lam, mu, nu are rates (1/seconds) for update generation, service and
    failure; r is the deterministic recovery duration in seconds. With
    require_delivery=True each period is resampled until at least one
    update is delivered before the failure, i.e. outage-only periods are
    conditioned away (off by default: faithful runs keep them).
    """

    lam: float
    mu: float
    nu: float
    r: float
    periods: int = 100_000
    master_seed: int = 1
    require_delivery: bool = False

    def __post_init__(self) -> None:
        for name in ("lam", "mu", "nu", "r"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "periods", int(self.periods))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        for name in ("lam", "mu", "nu"):
            if not getattr(self, name) > 0.0:
                raise ParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.r < 0.0:
            raise ParameterError(f"r must be >= 0, got {self.r}")
        if self.periods < 1:
            raise ParameterError(f"periods must be >= 1, got {self.periods}")
        if not 0 <= self.master_seed < 2**64:
            raise ParameterError("master_seed must be an unsigned 64-bit integer")

    @property
    def rho(self) -> float:
        return self.lam / self.mu

    def require_stable_queue(self) -> None:
        """Raise unless rho < 1 (needed by the closed forms and the detector)."""
        if not self.rho < 1.0:
            raise ParameterError(
                f"rho = lam/mu = {self.rho} must be < 1 for analytics/detection"
            )


class PeriodStreams(NamedTuple):
    """Independent random substreams for one period."""

    failure: np.random.Generator
    gaps: np.random.Generator
    services: np.random.Generator


def period_streams(master_seed: int, index: int) -> PeriodStreams:
    """Derive the three substreams used by period `index`.

    Children are SeedSequence(master_seed, spawn_key=(index, k)) with
    k = 0 (failure clock), 1 (generation gaps), 2 (service times), so any
    period can be generated in isolation and parallel or out-of-order
    evaluation reproduces a serial run bit for bit. Dedicating a stream to
    each draw type also keeps sample paths coupled across parameter sweeps
    that share a master seed (common random numbers).
    """
    return PeriodStreams(
        *(
            np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index, k)))
            for k in range(3)
        )
    )


@dataclass(frozen=True, eq=False)
class PeriodTrace:
    """One failure-to-failure period.

    `generations` holds every departure time (absolute seconds, first entry
    equals start_time); `arrival_times` holds the monitor-side arrival of
    the delivered prefix. Deliveries are always a prefix of the generations
    because FCFS arrival times are strictly increasing. failure_time and
    recovery_end are constructed as start_time + time_to_failure and
    failure_time + recovery_duration; the drawn durations are kept so the
    exact values survive the absolute-clock rounding.
    """

    start_time: float
    failure_time: float
    recovery_end: float
    time_to_failure: float
    recovery_duration: float
    generations: np.ndarray
    arrival_times: np.ndarray
    discarded_count: int

    @property
    def delivered_count(self) -> int:
        return int(self.arrival_times.size)

    @property
    def delivery_generations(self) -> np.ndarray:
        return self.generations[: self.arrival_times.size]

    @property
    def deliveries(self) -> np.ndarray:
        """Delivered updates as an (n, 2) array of (generation, arrival) times."""
        return np.column_stack((self.delivery_generations, self.arrival_times))

    @property
    def duration(self) -> float:
        return self.time_to_failure + self.recovery_duration

    def shifted(self, offset: float) -> "PeriodTrace":
        """The same trace moved by `offset` seconds on the absolute clock."""
        failure = self.start_time + offset + self.time_to_failure
        return PeriodTrace(
            start_time=self.start_time + offset,
            failure_time=failure,
            recovery_end=failure + self.recovery_duration,
            time_to_failure=self.time_to_failure,
            recovery_duration=self.recovery_duration,
            generations=self.generations + offset,
            arrival_times=self.arrival_times + offset,
            discarded_count=self.discarded_count,
        )


def lindley_arrival_times(departures: np.ndarray, services: np.ndarray) -> np.ndarray:
    """FCFS arrival times from the recursion a_k = max(d_k, a_{k-1}) + s_k."""
    if departures.size != services.size:
        raise ParameterError("departures and services must have equal length")
    arrivals = []
    prev = -math.inf
    for d, s in zip(departures.tolist(), services.tolist()):
        if d > prev:
            prev = d
        prev = prev + s
        arrivals.append(prev)
    return np.asarray(arrivals, dtype=np.float64)


def _generation_times(rng: np.random.Generator, rate: float, horizon: float) -> np.ndarray:
    """Departure times relative to the period start: 0, then Exp(rate) gaps,
    stopping at the first departure that would land beyond `horizon`."""
    parts = [np.zeros(1)]
    count = 1
    last = 0.0
    # bounded draw buffer: large enough to usually finish in one pass, small
    # enough that pathological rate * horizon hits EVENT_CAP, not the allocator
    chunk = min(max(8, int(1.25 * rate * horizon) + 8), 1 << 22)
    while True:
        cum = last + np.cumsum(rng.exponential(1.0 / rate, size=chunk))
        keep = int(np.searchsorted(cum, horizon, side="right"))
        if keep:
            parts.append(cum[:keep])
            count += keep
            if count > EVENT_CAP:
                raise SimulationLimitError(
                    f"period exceeded the {EVENT_CAP} generation cap"
                )
        if keep < chunk:
            return np.concatenate(parts)
        last = float(cum[-1])


def generate_period(params: SimParams, streams: PeriodStreams, start: float = 0.0) -> PeriodTrace:
    """Generate one period whose first update departs exactly at `start`.

    Draw order within the period is fixed (failure time, then generation
    gaps, then one service per generation) so a trace is a pure function of
    its substreams. With params.require_delivery the whole period is
    redrawn until the first service completes before the failure.
    """
    while True:
        T = streams.failure.exponential(1.0 / params.nu)
        rel_gens = _generation_times(streams.gaps, params.lam, T)
        services = streams.services.exponential(1.0 / params.mu, size=rel_gens.size)
        rel_arrivals = lindley_arrival_times(rel_gens, services)
        # arrivals strictly increase, so delivered packets (a_k <= T) form a prefix
        n_delivered = int(np.searchsorted(rel_arrivals, T, side="right"))
        if n_delivered > 0 or not params.require_delivery:
            break
    failure_time = start + T
    return PeriodTrace(
        start_time=start,
        failure_time=failure_time,
        recovery_end=failure_time + params.r,
        time_to_failure=T,
        recovery_duration=params.r,
        generations=start + rel_gens,
        arrival_times=start + rel_arrivals[:n_delivered],
        discarded_count=int(rel_gens.size) - n_delivered,
    )


@dataclass(frozen=True, eq=False)
class Timeline:
    """Concatenated periods on one absolute clock plus flattened views.

    The true sensor state is failed exactly on the union of
    [failure_times[p], recovery_ends[p]) and working elsewhere.
    unstable_queue is set when rho >= 1: the trace is still valid but the
    queue has no steady state, so analytics and detection do not apply.
    """

    params: SimParams
    periods: tuple[PeriodTrace, ...]
    total_time: float
    start_times: np.ndarray
    failure_times: np.ndarray
    recovery_ends: np.ndarray
    times_to_failure: np.ndarray
    arrival_times: np.ndarray
    arrival_generations: np.ndarray
    delivered_counts: np.ndarray
    unstable_queue: bool

    @classmethod
    def from_periods(cls, params: SimParams, traces: Sequence[PeriodTrace]) -> "Timeline":
        traces = tuple(traces)
        if not traces:
            raise ParameterError("a timeline needs at least one period")
        starts = np.array([t.start_time for t in traces])
        ends = np.array([t.recovery_end for t in traces])
        if starts.size > 1 and not np.array_equal(starts[1:], ends[:-1]):
            raise ParameterError("periods must abut: each start must equal the previous recovery end")
        return cls(
            params=params,
            periods=traces,
            total_time=float(ends[-1] - starts[0]),
            start_times=starts,
            failure_times=np.array([t.failure_time for t in traces]),
            recovery_ends=ends,
            times_to_failure=np.array([t.time_to_failure for t in traces]),
            arrival_times=np.concatenate([t.arrival_times for t in traces]),
            arrival_generations=np.concatenate([t.delivery_generations for t in traces]),
            delivered_counts=np.array([t.delivered_count for t in traces], dtype=np.int64),
            unstable_queue=params.rho >= 1.0,
        )

    @property
    def all_arrivals(self) -> np.ndarray:
        """Every delivery as an (n, 2) array of (generation, arrival) times."""
        return np.column_stack((self.arrival_generations, self.arrival_times))

    @property
    def delivery_count(self) -> int:
        return int(self.arrival_times.size)

    @property
    def end_time(self) -> float:
        return float(self.recovery_ends[-1])

    def failure_intervals(self) -> tuple[np.ndarray, np.ndarray]:
        """(starts, ends) of the spans where the true state is failed."""
        return self.failure_times, self.recovery_ends

    def first_arrival_by_period(self) -> np.ndarray:
        """First arrival time per period, NaN where nothing was delivered."""
        offsets = np.concatenate(([0], np.cumsum(self.delivered_counts)[:-1]))
        idx = np.minimum(offsets, max(self.delivery_count - 1, 0))
        first = self.arrival_times[idx] if self.delivery_count else np.zeros(len(self.periods))
        return np.where(self.delivered_counts > 0, first, np.nan)


def simulate(params: SimParams) -> Timeline:
    """Run `params.periods` abutting periods starting at t = 0.

    The result is a pure function of (master_seed, params): period p only
    consumes draws from period_streams(master_seed, p), so any evaluation
    order (including parallel) assembles the identical timeline.
    """
    traces = []
    start = 0.0
    for index in range(params.periods):
        trace = generate_period(params, period_streams(params.master_seed, index), start)
        traces.append(trace)
        start = trace.recovery_end
    return Timeline.from_periods(params, traces)
