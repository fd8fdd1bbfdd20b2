"""Exception hierarchy shared by every module."""


class TwalphaError(Exception):
    """Base class for all library errors."""


class PreconditionError(TwalphaError, ValueError):
    pass


class InstanceTooLarge(TwalphaError):
    """An exact routine was asked to work beyond its configured size cap."""


class CapExceeded(TwalphaError):
    """An enumeration produced more items than allowed.

    ``partial`` holds how many items had been produced when the cap tripped.
    """

    def __init__(self, message: str, partial: int):
        super().__init__(message)
        self.partial = partial


class HypothesisViolated(TwalphaError):
    """The input graph contains the forbidden induced subgraph."""

    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(TwalphaError):
    pass


class InfeasibleLP(TwalphaError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class LPNumericalError(TwalphaError):
    """The solver returned something that fails its own certificate check."""


class InvariantViolation(TwalphaError):
    """A proven guarantee failed on a concrete instance: this signals a bug."""


class RetriesExhausted(TwalphaError):
    def __init__(self, message: str, worst=None):
        super().__init__(message)
        self.worst = worst


class ProviderFailure(TwalphaError):
    """A separator provider could not split the independent set it was given."""

    def __init__(self, message: str, independent_set, detail=None):
        super().__init__(message)
        self.independent_set = tuple(independent_set)
        self.detail = detail or {}
