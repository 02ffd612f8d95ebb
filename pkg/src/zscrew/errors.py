"""Exception taxonomy shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(ValueError):
    """Argument exceeds the range covered by a loaded table."""


class CapacityError(MemoryError):
    """Requested table exceeds the configured memory budget."""


class TruncationError(ArithmeticError):
    """A series could not meet its error target within the term budget."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature failed to converge to the requested tolerance."""


class InsufficientSamplingError(ValueError):
    """Sampled data too coarse for the requested quadrature accuracy."""


class DataFormatError(ValueError):
    """Malformed input dataset (zeros table, cache file, config)."""


class ConditioningError(ArithmeticError):
    """A matrix construction failed its round-trip conditioning check."""
