"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An argument broke a documented precondition (wrong length, bad range)."""


class ConfigError(ValueError):
    """An experiment configuration is invalid; the message names the field."""


class NumericRangeError(ArithmeticError):
    """A numeric routine left its supported range (non-finite intermediates,
    quadrature too coarse to renormalize)."""


class StoreFormatError(ValueError):
    """A run-store file is malformed; the message carries the line number."""
