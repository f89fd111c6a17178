"""Run-aborting diagnostics, mapped to CLI exit codes."""


class SimulationAbort(RuntimeError):
    """Base for run-killing diagnostics; carries the CLI exit code."""

    exit_code = 1


class EdgeLeakError(SimulationAbort):
    """Probability reached the grid edge; results would be wrapped, not physical."""

    exit_code = 2


class NonFiniteFieldError(SimulationAbort):
    """The field picked up NaN/Inf values."""

    exit_code = 3
