"""Exception hierarchy shared across the package.

Every error raised on a documented contract violation derives from
:class:`MmvError`, so callers (and the CLI) can catch one type.
"""


class MmvError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteValue(MmvError):
    """A feature or query value is NaN or infinite."""


class SingleClass(MmvError):
    """Fewer than two classes present in the labels."""


class EmptyInput(MmvError):
    """Fewer than two observations supplied."""


class EmptySample(MmvError):
    """A CDF estimator received an empty sample."""


class NonPositiveBandwidth(MmvError):
    """Kernel bandwidth must be strictly positive."""


class EmptyClass(MmvError):
    """A class id in the expected range has no observations."""


class DegenerateScores(MmvError):
    """Scores have zero variance where spread is required."""


class StepModeGradient(MmvError):
    """Gradient requested for the piecewise-constant step-CDF objective."""


class QuadratureFailure(MmvError):
    """Numerical integration did not converge to the requested tolerance."""


class KeepOutOfRange(MmvError):
    """Screening size must lie in 1..p."""


class RankDeficientPrev(MmvError):
    """Previously extracted directions are not linearly independent."""


class InfeasibleSubspace(MmvError):
    """No feasible direction remains (too many constraints for p)."""


class NotBinary(MmvError):
    """Operation defined only for two-class data."""


class DegenerateCovariance(MmvError):
    """Covariance not invertible even after ridge regularization."""


class KTooLarge(MmvError):
    """Nearest-neighbour count exceeds the training-set size."""


class DimensionMismatch(MmvError):
    """Query vector length does not match the fitted feature space."""


class TooManyFolds(MmvError):
    """Cross-validation folds exceed what the label distribution allows."""


class OddN(MmvError):
    """Model I requires an even sample size for balanced labels."""


class ParseError(MmvError):
    """CSV cell could not be parsed; message names row and column."""


class MissingLabelColumn(MmvError):
    """CSV header does not contain the requested label column."""
