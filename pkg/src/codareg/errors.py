"""Exception hierarchy shared by the library, the service, and the CLI.

Two top-level branches matter for exit-code / HTTP-status mapping:
``ValidationError`` (bad input, exit 1 / HTTP 400) and ``NumericalError``
(the data defeated the numerics, exit 2 / HTTP 409).
"""


class CodaRegError(Exception):
    """Base class for all errors raised by codareg."""


class ValidationError(CodaRegError):
    """Input failed validation (schema, parsing, domain constraints)."""


class InsufficientDataError(ValidationError):
    """Fewer observations than parameters to estimate."""


class NumericalError(CodaRegError):
    """A numerically well-formed request that cannot be solved reliably."""


class CollinearityError(NumericalError):
    """Design matrix is rank deficient (or numerically so).

    ``columns`` lists the names participating in the near-dependency.
    """

    def __init__(self, message, columns=()):
        super().__init__(message)
        self.columns = tuple(columns)


class ConvergenceError(NumericalError):
    """Iterative fit did not converge; ``last_iterate`` holds the final
    coefficient vector, ``iterations`` the number of steps taken."""

    def __init__(self, message, last_iterate=None, iterations=0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations


class SeparationError(NumericalError):
    """Quasi-separation in logistic regression (unbounded linear predictor)."""


class PivotConsistencyError(NumericalError):
    """Statistics that must agree across pivot fits failed to do so."""
