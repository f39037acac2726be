class InvalidInputError(ValueError):
    """Raised when an argument violates a documented precondition."""


class ConvergenceError(RuntimeError):
    """Raised by reference solvers that must not return an unconverged iterate."""
