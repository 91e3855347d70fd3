"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter is outside its valid domain (non-positive rate, rho >= 1, ...)."""


class EmptyTimelineError(ValueError):
    """An operation needs at least one delivered update and the timeline has none."""


class SimulationLimitError(RuntimeError):
    """The per-period event cap was hit; the run is aborted rather than truncated."""


class OracleError(RuntimeError):
    """Numerical verification (quadrature) failed to converge; no guess is returned."""
