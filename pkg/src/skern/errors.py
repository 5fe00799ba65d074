"""Exception hierarchy shared by all modules."""


class SkernError(Exception):
    """Base class for every error raised by skern."""


class DomainError(SkernError, ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(SkernError, RuntimeError):
    """An iterative method failed to bracket or converge."""


class DeflationError(SkernError, ArithmeticError):
    """Division by (1 - x) left a remainder larger than allowed."""


class AlternationError(SkernError, ArithmeticError):
    """A weighted polynomial does not equioscillate as expected."""


class SquareRootError(SkernError, ArithmeticError):
    """A polynomial that should be a perfect square is not."""


class FactorizationError(SkernError, ArithmeticError):
    """Spectral factorization of a trigonometric polynomial failed."""


class UnsupportedCaseError(SkernError, ValueError):
    """The requested (order, restriction) pair has no known sharp solution."""
