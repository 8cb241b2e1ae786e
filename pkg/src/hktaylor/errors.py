"""Exception types shared across the package.

Quadrature failures are recoverable in sweep contexts (a cell is recorded
as skipped or errored), so everything derives from one base class that the
CLI can catch in a single place.
"""


class HKTaylorError(Exception):
    """Base class for all package-specific errors."""


# --- quadrature ---------------------------------------------------------

class InvalidInterval(HKTaylorError):
    """Interval endpoints are not finite or not strictly ordered."""


class NonConvergence(HKTaylorError):
    """The limit-of-proper-integrals acceleration failed the Cauchy
    criterion at the configured depth."""


class EvaluationFailure(HKTaylorError):
    """The integrand raised at a point that is not a declared singularity."""


class UnsortedGrid(HKTaylorError):
    """Cumulative evaluation grid is not sorted ascending from the base."""


# --- norms --------------------------------------------------------------

class UnboundedSample(HKTaylorError):
    """Grid values diverge under refinement while estimating an
    essential supremum."""


class PrimitiveNotAnchored(HKTaylorError):
    """A primitive passed to the distributional norm does not vanish at
    the left endpoint."""


# --- taylor -------------------------------------------------------------

class DerivativeUnavailable(HKTaylorError):
    """A derivative evaluator does not exist at the requested order or
    point."""

    def __init__(self, order, point=None, message=None):
        self.order = order
        self.point = point
        super().__init__(message or f"derivative of order {order} unavailable"
                         + ("" if point is None else f" at x={point}"))


class DerivativeUnavailableAtBase(DerivativeUnavailable):
    """The expansion base point is a non-differentiability point."""


class DerivativeUnavailableAtX0(DerivativeUnavailable):
    """The auxiliary point x0 is a non-differentiability point."""


class InvalidPoint(HKTaylorError):
    """Evaluation point lies left of the expansion base (unsupported
    orientation)."""


class DegreeOutOfRange(HKTaylorError):
    """Polynomial degree outside the supported range (n <= 20)."""


# --- corpus -------------------------------------------------------------

class InvalidParams(HKTaylorError):
    """Corpus function parameters violate their invariants."""


class UnknownFunction(HKTaylorError):
    """Registry lookup failed; carries the offending label."""


class ConjugateMismatch(HKTaylorError):
    """Supplied Holder exponents do not satisfy 1/alpha + 1/beta = 1."""


# --- cli ----------------------------------------------------------------

class ConfigInvalid(HKTaylorError):
    """Sweep configuration failed validation."""


class OutputUnwritable(HKTaylorError):
    """Report destination could not be written."""
