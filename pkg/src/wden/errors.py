"""Exception hierarchy shared by the estimators and the command-line layer."""


class WdenError(Exception):
    """Base class for all errors raised by :mod:`wden`."""


class ConfigurationError(WdenError, ValueError):
    """Invalid parameter, unknown name or inconsistent option."""


class ShapeError(WdenError, ValueError):
    """Array length does not match the dyadic structure expected."""


class DataError(WdenError, ValueError):
    """Sample is empty or lies outside the estimation interval."""


class SampleTooSmallError(WdenError, ValueError):
    """Sample size too small for the requested resolution levels."""


class SingularWeightError(WdenError, ArithmeticError):
    """Weight function is infinite at the requested point."""
