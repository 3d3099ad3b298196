"""Exception hierarchy shared by every module of the kit."""


class CholkitError(Exception):
    """Base class for all errors raised by cholkit."""


class DimensionError(CholkitError, ValueError):
    """Operand shapes do not conform."""


class PreconditionError(CholkitError, ValueError):
    """Input violates a documented precondition (e.g. not Hermitian)."""


class NotPositiveDefiniteError(CholkitError):
    """A positive pivot was required but not found.

    ``index`` is the 1-based column (or recursion step) where it happened.
    """

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"matrix is not positive definite (pivot {index})")


class ZeroPivotError(CholkitError):
    """A (block) pivot vanished during a square-root-free factorization."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"zero pivot at block {index}")


class SingularFactorError(CholkitError):
    """A diagonal factor block is too close to singular to invert."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"singular factor block {index}")


class RangeError(CholkitError, IndexError):
    """A time index falls outside the realization."""


class UsageError(CholkitError, ValueError):
    """Bad experiment configuration; ``key`` names the offending setting."""

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
