"""Exception types shared across the package."""


class NRFilterError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(NRFilterError):
    """Invalid user input: design files, matrices, parameter ranges."""


class NumericError(NRFilterError):
    """Numerical failure during a computation.

    Carries the frequency (Hz) at which the failure occurred when that is
    meaningful, so sweeps can report the offending grid point.
    """

    def __init__(self, message: str, frequency: float | None = None):
        if frequency is not None:
            message = f"{message} (f = {frequency:.6g} Hz)"
        super().__init__(message)
        self.frequency = frequency
