"""Exception and warning types shared across the package."""


class GWError(Exception):
    """Base class for all package errors."""


class MalformedSequence(GWError, ValueError):
    """A preorder outdegree sequence does not encode a finite tree."""


class IndexOutOfRange(GWError, IndexError):
    pass


class InvalidPmf(GWError, ValueError):
    pass


class ImpossibleSize(GWError, ValueError):
    """P(|T| = n) = 0 for the requested offspring distribution."""


class BudgetExhausted(GWError, RuntimeError):
    """Rejection sampling hit its attempt budget; retry with a larger one."""


class LimitExceeded(GWError, ValueError):
    pass


class TooLarge(LimitExceeded):
    """Input exceeds the size an exhaustive routine is willing to handle."""


class CutoffTooSmall(GWError, ValueError):
    pass


class SampleTooSmall(GWError, ValueError):
    pass


class InsufficientSizes(GWError, ValueError):
    pass


class ConfigInvalid(GWError, ValueError):
    pass


class PrecisionWarning(UserWarning):
    """Floating-point evaluation may lose accuracy (very large outdegrees)."""
