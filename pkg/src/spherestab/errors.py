"""Package exceptions."""


class IntegrityError(RuntimeError):
    """A structural guarantee failed (wrong dimension, eigenvalue off-cluster):
    signals an implementation bug, not bad input data."""


class UndefinedDeficitError(ValueError):
    """Combined deficit requested for a map with vanishing signed volume."""


class SolverError(RuntimeError):
    """An iterative solver (recentering, gauge fixing) failed to converge."""
