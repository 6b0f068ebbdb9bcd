"""Exception types shared across the package."""


class CarnotError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(CarnotError, ValueError):
    """An argument violates a documented precondition."""


class SingularityError(CarnotError, ArithmeticError):
    """A singular evaluator (Γ, K, ...) was evaluated at its pole."""


class UnsupportedGroupError(CarnotError, NotImplementedError):
    """The requested operation has no closed form for this group."""


class ParseError(CarnotError, ValueError):
    """A polynomial or config string could not be parsed."""


class QuadratureError(CarnotError, RuntimeError):
    """A quadrature or Monte-Carlo estimate failed."""
