"""Shared exception types."""


class NumericsError(RuntimeError):
    """A numeric contract failed (integrator norm drift, solver residual).

    CLI commands map this to exit code 3 so scripted callers can tell a
    bad config (exit 2) from a numeric breakdown.
    """
