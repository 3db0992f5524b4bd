"""Exception hierarchy shared by all modules."""


class EstimatorError(Exception):
    """Base class for every error raised by this package."""


class InvalidDimension(EstimatorError, ValueError):
    """Matrix has the wrong shape for the requested operation."""


class NotHermitian(EstimatorError, ValueError):
    """Input violates the Hermiticity tolerance of a Hermitian-only routine."""


class NoConvergence(EstimatorError, RuntimeError):
    """Iterative routine exhausted its budget without meeting tolerance."""


class NumericDomainError(EstimatorError, RuntimeError):
    """A computation was requested at a point where it is ill-defined.

    The CLI maps this family to exit code 3.
    """


class DegenerateFrame(NumericDomainError):
    """Coherent frame Gram matrix is numerically singular."""


class UnsupportedDerivative(NumericDomainError):
    """State derivative has weight outside the state's support."""


class DegenerateParameter(NumericDomainError):
    """Estimation is singular at these parameters (no decoherence contrast)."""
