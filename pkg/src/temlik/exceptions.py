"""Exception types raised by the temlik package.

``TemlikError`` is the common base.  ``NumericsError`` marks failures of the
numerical machinery (differentiation, optimisation, quadrature, pivot
assembly); the CLI maps these to exit code 3, and everything else that is the
caller's fault (bad flags, unknown models, malformed files) to exit code 2.
"""


class TemlikError(Exception):
    """Base class for all package errors."""


class NumericsError(TemlikError):
    """A numerical computation failed or produced inconsistent results."""


class DifferentiationError(NumericsError):
    """Non-finite function value at a finite-difference probe point."""

    def __init__(self, message, point):
        super().__init__(f"{message} (probe point {point})")
        self.point = point


class SingularMatrixError(NumericsError):
    """A matrix required to have full rank does not."""


class ConvergenceError(NumericsError):
    """Iterative optimisation failed to converge."""

    def __init__(self, message, last_iterate=None):
        if last_iterate is not None:
            message = f"{message} (last iterate {last_iterate})"
        super().__init__(message)
        self.last_iterate = last_iterate


class NotPositiveDefiniteError(NumericsError):
    """Observed information is not positive definite (boundary or saddle)."""


class InconsistentOptimumError(NumericsError):
    """A log-likelihood value exceeded the reported maximum beyond tolerance."""


class NuisanceInformationError(NumericsError):
    """The nuisance information block is singular."""


class IdentifiabilityError(NumericsError):
    """The canonical-parameter Jacobian is singular, so the model is not
    identifiable at the requested point."""


class InformationSignError(NumericsError):
    """An information determinant ratio was non-positive."""


class InternalConsistencyError(NumericsError):
    """Two algebraically equivalent evaluations disagreed beyond tolerance."""


class SignMismatchError(NumericsError):
    """r and q disagree in sign outside the near-maximum window."""


class AccuracyNotMetError(NumericsError):
    """Quadrature failed to reach the requested accuracy."""

    def __init__(self, message, achieved):
        super().__init__(f"{message} (achieved bound {achieved:.3e})")
        self.achieved = achieved


class DensityZeroError(NumericsError):
    """The response density vanishes at an observed point, so the pivot
    cannot be differentiated there."""


class UnsupportedOperationError(TemlikError):
    """The operation is undefined for this model (for example, constrained
    fitting of a one-parameter model)."""


class UnsupportedModelError(TemlikError):
    """The model does not provide the structure this operation requires."""


class DomainError(TemlikError):
    """A parameter value lies outside the model's admissible region, or a
    quantity became non-finite there."""


class CurveTooShortError(TemlikError):
    """Too few usable grid points to interpolate across the singular window."""


class GridNotBracketingError(TemlikError):
    """A target significance level is not bracketed by the curve's grid."""

    def __init__(self, message, suggested_lo=None, suggested_hi=None):
        if suggested_lo is not None and suggested_hi is not None:
            message = (f"{message}; extend the grid to roughly "
                       f"[{suggested_lo:.6g}, {suggested_hi:.6g}]")
        super().__init__(message)
        self.suggested_lo = suggested_lo
        self.suggested_hi = suggested_hi
