"""Exception taxonomy.

Validation errors indicate bad inputs or configuration (CLI exit code 1);
numerical errors indicate a failed or out-of-regime computation (exit code 2).
"""


class BathprobeError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(BathprobeError):
    """Bad input, configuration or grid placement."""


class NumericalError(BathprobeError):
    """Numerical failure or out-of-regime evaluation."""


class ConfigError(ValidationError):
    pass


class PulseOffGridError(ValidationError):
    pass


class IntervalNotOnGridError(ValidationError):
    pass


class AlphaOutOfRangeError(ValidationError):
    pass


class NonHermitianError(NumericalError):
    pass


class RateNegativeError(NumericalError):
    pass


class PositivityLossError(NumericalError):
    pass


class StepOverflowError(NumericalError):
    pass


class TruncationLeakError(NumericalError):
    pass


class NonRealExpectationError(NumericalError):
    pass
