"""Exception hierarchy shared by all totpos modules."""


class TotposError(Exception):
    """Base class for errors raised by this package."""


class InputError(TotposError, ValueError):
    """Malformed arguments: bad shapes, out-of-range indices, invalid specs."""


class ResourceError(TotposError, RuntimeError):
    """A requested computation exceeds a configured size cap."""


class NumericError(TotposError, ArithmeticError):
    """An iterative or factorization routine failed to reach its accuracy target."""


class ClassificationError(TotposError, ValueError):
    """A matrix does not belong to the class an operation requires."""
