"""Exception types raised across the package."""

from numpy.linalg import LinAlgError


class DimensionMismatch(ValueError):
    """Operands are not conformable for the requested operation."""


class NonUnitRotor(ValueError):
    """Rotation requested with a rotor whose norm deviates from one."""


class NonFiniteEvaluation(ArithmeticError):
    """A caller-supplied cost function returned a non-finite value."""


class NonFiniteUpdate(ArithmeticError):
    """An adaptive update produced non-finite weights; state was not committed."""


class ZeroRegressor(ValueError):
    """Operation requires a regressor with nonzero norm."""


class SingularCovariance(LinAlgError):
    """Covariance matrix is singular or too ill-conditioned to invert."""


class SingularMatrix(LinAlgError):
    """Matrix is singular up to the working tolerance."""


class NotHermitian(ValueError):
    """Input matrix is required to be Hermitian."""


class AssumptionViolated(ValueError):
    """Covariance has significant imaginary component parts; the requested
    spectral relation is only defined for componentwise-real covariances."""


class StepTooLarge(ValueError):
    """Step size outside the validity region of the requested formula."""


class InsufficientTrials(ValueError):
    """Not enough independent trials for a statistically meaningful fit."""


class EmptyInput(ValueError):
    """A nonempty sample collection is required."""


class RaggedInput(ValueError):
    """Samples do not all share the same length."""


class ZeroPowerSignal(ValueError):
    """Signal has zero empirical power; the requested ratio is undefined."""


class CalibrationFailed(RuntimeError):
    """Generator calibration search did not reach the target."""


class ParseError(ValueError):
    """A text input could not be parsed; carries row/column context."""

    def __init__(self, message, row=None, column=None):
        if row is not None:
            message = f"{message} (row {row}" + (f", column {column})" if column is not None else ")")
        super().__init__(message)
        self.row = row
        self.column = column


class ChannelCountError(ValueError):
    """Input file does not provide the expected number of numeric channels."""
