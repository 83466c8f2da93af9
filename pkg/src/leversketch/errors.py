"""Exception types shared across the package."""


class LeverSketchError(Exception):
    """Base class for all errors raised by this package."""


class AllZeroMatrix(LeverSketchError):
    """Raised when an operation requires a nonzero matrix."""


class DimensionMismatch(LeverSketchError):
    """Raised when operand shapes are incompatible."""


class NegativeLambda(LeverSketchError):
    """Raised when a regularization weight is negative (or not positive
    where positivity is required)."""


class Eps0OutOfRange(LeverSketchError):
    """Raised when the score-perturbation level is outside (0, 1)."""


class EpsOutOfRange(LeverSketchError):
    """Raised when the accuracy parameter is outside (0, 1)."""


class AllZeroScores(LeverSketchError):
    """Raised when a sampling distribution is requested from all-zero scores."""


class NotOrthonormal(LeverSketchError):
    """Raised when a matrix expected to have orthonormal columns does not."""


class ZeroNormInput(LeverSketchError):
    """Raised when a matrix-product check receives a zero-norm factor."""


class SketchRankCollapse(LeverSketchError):
    """Raised when repeated sketch draws all lose rank relative to the design."""


class NonPositiveDimension(LeverSketchError):
    """Raised when a cost-model dimension is not a positive integer."""


class MalformedInput(LeverSketchError):
    """Raised when an input file cannot be parsed or violates preconditions."""
