"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class NumericalError(RuntimeError):
    """A numerical kernel failed (non-convergence, loss of definiteness, ...)."""
