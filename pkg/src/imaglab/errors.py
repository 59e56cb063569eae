"""Exception types raised across the package."""


class ImaglabError(Exception):
    """Base class for all package errors."""


class NotHermitian(ImaglabError, ValueError):
    pass


class NoConvergence(ImaglabError, RuntimeError):
    pass


class NegativeEigenvalue(ImaglabError, ValueError):
    """A supposed density operator has an eigenvalue below -1e-9."""


class InvalidState(ImaglabError, ValueError):
    """Input violates the pure-state or density-operator invariants."""


class NotNormalized(InvalidState):
    pass


class WrongDimension(ImaglabError, ValueError):
    pass


class OutOfRange(ImaglabError, ValueError):
    pass


class NotFound(ImaglabError, RuntimeError):
    pass


class ParamOutOfRange(ImaglabError, ValueError):
    pass


class IncompleteKraus(ImaglabError, ValueError):
    pass


class DimensionMismatch(ImaglabError, ValueError):
    pass


class DomainError(ImaglabError, ValueError):
    """A closed-form expression was evaluated outside its real domain."""
