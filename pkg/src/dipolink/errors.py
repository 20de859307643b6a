"""Exception types shared across the package."""


class DipolinkError(Exception):
    """Base class for all package-specific errors."""


class InvalidGeometryError(DipolinkError):
    """Raised for malformed geometries (non-increasing positions, too few sites)."""


class DomainError(DipolinkError):
    """Raised when an argument lies outside its documented domain."""


class NumericInputError(DipolinkError):
    """Raised when a numeric input contains NaN or infinity."""


class ConvergenceError(DipolinkError):
    """Raised when an iterative solver fails to converge.

    Carries the remaining off-diagonal residual for diagnosis.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ShapeError(DipolinkError):
    """Raised on dimension mismatches between states and operators."""


class ExpansionInvalidError(DipolinkError):
    """Raised when the first-order splitting expansion yields a non-positive gap."""


class InfeasibleConstraintError(DipolinkError):
    """Raised when no placement satisfying the fidelity constraint was found.

    The best point found (and its summary) is attached for inspection.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
