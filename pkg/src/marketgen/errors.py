"""Exception hierarchy shared by all marketgen modules."""


class MarketGenError(Exception):
    """Base class for all errors raised by this package."""


class ConstantColumn(MarketGenError):
    """A column has zero range or zero variance where spread is required."""


class InvalidValue(MarketGenError):
    """Non-finite or otherwise unusable numeric input."""


class DomainError(MarketGenError):
    """Argument outside the mathematical domain of the operation."""


class OutOfBounds(MarketGenError):
    """Value falls outside the bounds a fitted transform was built on."""


class ShapeError(MarketGenError):
    """Array shapes do not compose."""


class EmptyBatch(MarketGenError):
    """A training batch with no samples."""


class EmptyInput(MarketGenError):
    """An empty sample where at least one observation is required."""


class TooFewRows(MarketGenError):
    """Not enough observations for the requested computation."""


class TooLarge(MarketGenError):
    """Model too large for exact enumeration."""


class SupportError(MarketGenError):
    """q assigns zero mass where p does not (KL divergence undefined)."""


class NotPositiveDefinite(MarketGenError):
    """Correlation matrix is not positive definite."""


class DivergedError(MarketGenError):
    """Training produced a non-finite parameter or loss.

    ``step`` records the epoch or iteration at which divergence was detected.
    """

    def __init__(self, message: str, step: int):
        super().__init__(f"{message} (step {step})")
        self.step = step


class CacheError(MarketGenError):
    """A backward pass was given a cache from a different forward pass."""


class UsageError(MarketGenError):
    """Invalid command-line usage or malformed configuration."""


class VersionError(MarketGenError):
    """Persisted document has an unsupported format version."""
