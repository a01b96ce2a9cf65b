"""Exception hierarchy for flatwell."""

from __future__ import annotations


class FlatwellError(Exception):
    """Base class for all flatwell errors."""


class InvalidArgumentError(FlatwellError, ValueError):
    """An argument violates a documented precondition."""


class EigenNonConvergenceError(FlatwellError):
    """QR iteration failed to deflate within the iteration budget.

    ``partial`` holds an :class:`~flatwell.eigensolve.EigenReport` with
    ``converged=False`` and whatever eigenvalues had deflated.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class SpuriousComplexEigenvalueError(FlatwellError):
    """An eigenvalue carried an imaginary part above tolerance."""

    def __init__(self, message: str, eigenvalue: complex):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class BisectionError(FlatwellError):
    """Sturm-sequence bisection could not bracket an eigenvalue."""


class ConvergenceFailure(FlatwellError):
    """Node escalation did not reach the requested significant figures.

    ``agreement`` maps level index n to the agreed digits of the last grid pair.
    """

    def __init__(self, message: str, agreement: dict[int, int] | None = None):
        super().__init__(message)
        self.agreement = agreement or {}


class IntegrationError(FlatwellError):
    """Adaptive quadrature did not reach its tolerance."""

    def __init__(self, message: str, achieved: float):
        super().__init__(message)
        self.achieved = achieved


class SearchError(FlatwellError):
    """Golden-section search found a non-unimodal objective."""


class VariationalViolation(FlatwellError):
    """A trial-function bound fell below the numerical ground state."""
