"""Exception hierarchy shared by the library and the command line front end."""


class NullDistError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 3


class DomainError(NullDistError, ValueError):
    """An argument lies outside the domain an operation accepts."""

    exit_code = 2


class PreconditionError(NullDistError, ValueError):
    """A documented precondition of an operation does not hold."""

    exit_code = 2


class ScenarioError(NullDistError, ValueError):
    """A scenario file could not be parsed or validated."""

    exit_code = 2


class NumericError(NullDistError, ArithmeticError):
    """A numerical routine failed to reach its target accuracy."""

    exit_code = 3

    def __init__(self, message: str, achieved: float | None = None):
        super().__init__(message)
        self.achieved = achieved


class UnreachableError(NumericError):
    """Two lattice nodes are not connected by any admissible path."""


class ConstructionError(NullDistError, ValueError):
    """A curve could not be built from the requested data."""

    exit_code = 2
