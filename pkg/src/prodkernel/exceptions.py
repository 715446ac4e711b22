"""Exception types shared across the package."""


class KernelSpecError(ValueError):
    """A kernel spec string could not be parsed or violates a parameter constraint."""


class SizeLimitError(ValueError):
    """A requested dense object would exceed the configured entry limit."""


class NotPositiveDefiniteError(ArithmeticError):
    """Cholesky factorization hit a non-positive pivot.

    ``index`` is the 0-based row at which the factorization broke down.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class BasisBreakdownError(ArithmeticError):
    """Newton basis construction hit a degenerate point (power value at or below
    the numerical-rank tolerance).

    ``index`` is the 0-based position of the offending center.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class CandidatesExhaustedError(RuntimeError):
    """Every candidate of every component has already been selected."""


class PowerBreakdown(Exception):
    """Clean termination signal from a greedy step: the best available power
    value fell below the numerical-rank tolerance.  Not a failure."""
