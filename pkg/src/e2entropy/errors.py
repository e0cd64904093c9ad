"""Exception hierarchy. Every error is a ``ValueError`` so plain callers can
catch one type."""


class DomainError(ValueError):
    """Argument outside the domain of the requested quantity."""


class PreconditionError(DomainError):
    """Input is well formed but violates an operation's precondition,
    e.g. a spectrum that is not unit trace passed to ``entropy``."""


class NotPSDError(DomainError):
    """Matrix or spectrum has an eigenvalue below ``-CLAMP_TOL``."""


class UndefinedRatioError(DomainError):
    """``S1 / sqrt(e2)`` requested at rank < 2, where it is 0/0."""
