"""Exception hierarchy shared by all modules."""


class FreeIneqError(Exception):
    """Base class for library errors."""


class BasisError(FreeIneqError):
    """A series was given in the wrong Chebyshev basis for the operation."""


class ShapeError(FreeIneqError):
    """Tensor order mismatch."""


class CapacityError(FreeIneqError):
    """Tensor order or index-sum exceeds the supported caps."""


class DomainError(FreeIneqError):
    """Argument outside the admissible domain (negative shift, support leaving the domain, ...)."""


class NonFiniteError(FreeIneqError):
    """A sampled function value was NaN or infinite."""


class SolverError(FreeIneqError):
    """The support solver did not converge."""


class ConsistencyError(FreeIneqError):
    """An equilibrium measure failed its mass, positivity or constraint checks."""


class SpectralError(FreeIneqError):
    """A Galerkin matrix that should be positive definite is not."""


class DivergenceError(FreeIneqError):
    """An integral that defines an inequality's right side is infinite."""
