"""Exception types shared across the package."""


class AlphaBetaError(Exception):
    """Base class for all package errors."""


class DimensionError(AlphaBetaError, ValueError):
    pass


class LieAlgebraError(AlphaBetaError, ValueError):
    """Structure constants fail the Jacobi identity or are malformed."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InnerProductError(AlphaBetaError, ValueError):
    pass


class GroupElementError(AlphaBetaError, ValueError):
    """A matrix is not an element (or tangent vector) of the model group."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularityError(AlphaBetaError, ValueError):
    """phi was evaluated at (or a strip contains) a declared singular point."""


class NonRegularError(AlphaBetaError):
    """phi cannot define a regular Finsler metric for any positive radius.

    Raised by the regularity routines as the non-regular marker; it is
    deliberately distinct from a negative margin.
    """


class InadmissibleError(AlphaBetaError, ValueError):
    """The invariant field is too long for phi (violates |X| < b0)."""

    def __init__(self, message, norm=None, bound=None):
        super().__init__(message)
        self.norm = norm
        self.bound = bound


class AutomorphismError(AlphaBetaError, ValueError):
    """A matrix or lifted map fails the automorphism/homomorphism check."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PreconditionError(AlphaBetaError, ValueError):
    pass


class SpecError(AlphaBetaError, ValueError):
    """Problem-spec parsing failed; ``errors`` lists (path, reason) pairs."""

    def __init__(self, errors, validation=False):
        self.errors = list(errors)
        self.validation = validation
        super().__init__("; ".join(f"{p}: {r}" for p, r in self.errors))
