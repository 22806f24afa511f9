"""Shared exception types."""


class InternalCheckError(RuntimeError):
    """An internal cross-check failed (two independent computations of the
    same quantity disagreed).  Never expected on valid inputs; a bug trap."""
