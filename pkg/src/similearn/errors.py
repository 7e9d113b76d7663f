"""Exception types shared across the package."""


class DegenerateKernelError(ValueError):
    """Raised when a kernel matrix cannot be normalized.

    Happens when every kernel-induced squared distance is zero and the
    entry-magnitude fallback also has nothing to divide by (all-zero
    matrix), or when a squared distance is negative beyond tolerance.
    """


class LinearSolveError(RuntimeError):
    """Raised when a linear system inside an update is numerically singular."""

    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


class DivergenceError(RuntimeError):
    """Raised when iterates blow up (non-finite values) during optimization."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class DataFormatError(ValueError):
    """Raised on malformed input files; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
