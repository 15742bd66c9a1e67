class RatbaseError(Exception):
    """Base class for errors raised by rational_base_kit."""


class InvalidBaseError(RatbaseError, ValueError):
    """The pair (p, q) is not a rational base."""


class DigitError(RatbaseError, ValueError):
    """A digit lies outside the alphabet an operation requires."""


class LengthMismatchError(RatbaseError, ValueError):
    """Digitwise operation on words of different lengths."""


class InvalidWordError(RatbaseError, ValueError):
    """A word is not the label of a run where one is required."""


class BoundsError(RatbaseError, ValueError):
    """Digit bounds with dmin > dmax."""


class RegimeError(RatbaseError, ValueError):
    """The operation is only defined for small (p <= 2q-1) or large bases."""


class DepthLimitError(RatbaseError, ValueError):
    """A requested depth exceeds the configured cap."""


class FrontierCapExceeded(RatbaseError, RuntimeError):
    """A breadth-first frontier or enumeration grew past its cap."""

    def __init__(self, depth, size, cap):
        self.depth = depth
        self.size = size
        self.cap = cap
        super().__init__(f"Frontier of {size} entries at depth {depth} exceeds cap {cap}")


class InvalidStateError(RatbaseError, ValueError):
    """A state of T_z, S_z or D_z must be a natural number."""
