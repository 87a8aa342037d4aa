"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A constructor or operation was given inconsistent or invalid parameters."""


class ModelError(ValueError):
    """A statistical model is invalid (non-Hermitian or non-PSD covariance, bad range)."""


class NumericalError(RuntimeError):
    """A linear-algebra step is too ill-conditioned to trust.

    Carries an estimate of the offending condition number when available.
    """

    def __init__(self, message, condition=None):
        if condition is not None:
            message = f"{message} (condition estimate {condition:.3e})"
        super().__init__(message)
        self.condition = condition


class EstimationError(RuntimeError):
    """The frequency-offset search could not produce any usable candidate."""
