"""Exception types raised across the toolkit."""


class GraphFormatError(ValueError):
    """Malformed graph input (bad header, out-of-range vertex, loop)."""


class PreconditionError(ValueError):
    """An operation was called on input outside its domain."""


class NotDistanceRegularError(PreconditionError):
    """Raised when intersection numbers are not constant.

    ``pair`` is an ordered vertex pair ``(i, j)`` at distance ``delta`` whose
    counts disagree with an earlier pair at the same distance.
    """

    def __init__(self, message, pair=None, delta=None):
        super().__init__(message)
        self.pair = pair
        self.delta = delta


class CapExceededError(RuntimeError):
    """A group search or enumeration would exceed its configured cap."""


class NotSymmetricError(PreconditionError):
    """A realization is not a realization for the given group.

    ``generator`` is the index of the offending generator and ``residual`` the
    intertwining residual (or orthogonality defect) that was observed.
    """

    def __init__(self, message, generator=None, residual=None):
        super().__init__(message)
        self.generator = generator
        self.residual = residual
