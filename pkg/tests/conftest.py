import numpy as np
import pytest

from agemon import PeriodTrace, SimParams, Timeline, simulate

# Standard configuration used throughout: lambda=0.5, mu=1, nu=1/200, r=20.
DEFAULTS = dict(lam=0.5, mu=1.0, nu=0.005, r=20.0)
SEED = 20260810


class ScriptedStream:
    """Stands in for a numpy Generator: serves preset values, then a filler.

    Lets tests drive generate_period with hand-picked draws; exponential()
    ignores the scale and simply pops the script.
    """

    def __init__(self, values, filler=1e9):
        self.values = list(values)
        self.filler = filler

    def exponential(self, scale, size=None):
        if size is None:
            return self.values.pop(0) if self.values else self.filler
        out = []
        for _ in range(size):
            out.append(self.values.pop(0) if self.values else self.filler)
        return np.asarray(out)


def manual_period(start, T, r, generations, arrivals, discarded=0):
    """Build a PeriodTrace directly from relative generation/arrival times."""
    generations = np.asarray(generations, dtype=np.float64)
    arrivals = np.asarray(arrivals, dtype=np.float64)
    failure = start + T
    return PeriodTrace(
        start_time=start,
        failure_time=failure,
        recovery_end=failure + r,
        time_to_failure=T,
        recovery_duration=r,
        generations=start + generations,
        arrival_times=start + arrivals,
        discarded_count=discarded,
    )


def manual_timeline(period_specs, lam=0.5, mu=1.0, nu=0.005, seed=1):
    """Timeline from (T, r, generations, arrivals, discarded) tuples; periods
    are laid out back to back starting at t = 0."""
    traces = []
    start = 0.0
    for T, r, gens, arrs, *rest in period_specs:
        discarded = rest[0] if rest else len(gens) - len(arrs)
        traces.append(manual_period(start, T, r, gens, arrs, discarded))
        start = traces[-1].recovery_end
    params = SimParams(lam=lam, mu=mu, nu=nu, r=period_specs[0][1], periods=len(traces), master_seed=seed)
    return Timeline.from_periods(params, traces)


@pytest.fixture(scope="session")
def small_timeline():
    """2000 default periods; big enough for loose statistical checks."""
    return simulate(SimParams(**DEFAULTS, periods=2000, master_seed=SEED))


@pytest.fixture(scope="session")
def medium_timeline():
    """10^4 default periods; used by the distributional tests."""
    return simulate(SimParams(**DEFAULTS, periods=10_000, master_seed=SEED))
