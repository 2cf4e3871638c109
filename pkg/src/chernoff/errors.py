"""Exception types shared across the package."""


class ChernoffError(Exception):
    """Base class for numerical failures raised by this package."""


class PrecisionError(ChernoffError):
    """A requested accuracy could not be reached within the work budget."""


class DomainError(ChernoffError, ValueError):
    """An argument lies outside the region where a quantity is reliable."""


class ConvergenceError(ChernoffError):
    """An iterative method did not converge in its iteration budget."""


class IllConditionedError(ChernoffError, ValueError):
    """Input parameters make the computation numerically meaningless."""
