"""Exception types shared across the package."""


class M0DeformError(Exception):
    """Base class for all package-specific errors."""


class WindowError(M0DeformError):
    """A bracket or coefficient was requested outside the truncation window.

    Distinct from "the value is zero": out-of-window data is undefined.
    """


class InvalidTruncationError(M0DeformError, ValueError):
    """Truncation degree too small for the requested construction."""


class InvalidRescaleError(M0DeformError, ValueError):
    """A basis rescale with a zero or missing scale factor."""


class UnsupportedDegreeError(M0DeformError, ValueError):
    """Cochain degree outside the supported range for this operation."""


class NotACocycleError(M0DeformError, ValueError):
    """Operation requires a cocycle; carries the first violating tuple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ContradictoryFamilyError(M0DeformError, ValueError):
    """The k-family is contradictory at this weight (deep negative weight)."""


class ObstructedError(M0DeformError):
    """A non-compensable Massey square is nonzero; carries the witness triple."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidCompensatorError(M0DeformError, ValueError):
    """Compensator does not satisfy d(alpha) = Massey square on the window."""


class DepthExceededError(M0DeformError):
    """Branch exploration exceeded the configured depth; carries partial results."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
