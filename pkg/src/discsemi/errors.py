"""Exception hierarchy for the discsemi package.

Two broad categories map onto distinct command-line exit codes:

* ``InputError`` (exit code 2): the request itself is invalid -- a required
  parameter is missing, a parameter violates a documented constraint, or an
  evaluation point sits on a pole or outside the support.
* ``ComputationError`` (exit code 1): the request was well formed but the
  computation cannot produce a result -- a series diverges, a moment matrix
  is singular, or an internal consistency check fails.

Every error carries a human-readable message; a few subclasses also expose
structured fields (for example the index of the singular minor).
"""

from __future__ import annotations


class DiscsemiError(Exception):
    """Base class for all package-specific errors."""

    exit_code = 1


class InputError(DiscsemiError):
    """The request is invalid as posed (CLI exit code 2)."""

    exit_code = 2


class ComputationError(DiscsemiError):
    """The computation cannot be completed (CLI exit code 1)."""

    exit_code = 1


# ---------------------------------------------------------------------------
# Input errors


class MissingParameter(InputError):
    """A family or operation requires a parameter that was not supplied."""


class OutOfSupport(InputError):
    """A point lies outside the support of the functional."""


class PoleAtSupportPoint(InputError):
    """An evaluation point coincides with a support point of the functional,
    where the Stieltjes transform has a pole."""


class RegularityViolation(InputError):
    """A transformation's regularity condition fails (for example a
    Christoffel transformation at a point where the functional annihilates
    the divided factor)."""


class ConstraintViolated(InputError):
    """A documented parameter constraint is violated (for example a
    Geronimus point placed on the support lattice)."""


class TruncationAtEtaRoot(InputError):
    """A truncation point coincides with a root of the numerator polynomial
    of the Pearson ratio, so the truncated weight already terminates there
    and the truncation is ill-posed."""


# ---------------------------------------------------------------------------
# Computation errors


class DivergentSeries(ComputationError):
    """A hypergeometric series diverges for the given argument."""


class PoleInDenominator(ComputationError):
    """A lower hypergeometric parameter produces a zero factor before the
    series terminates."""


class NonPolynomialBoundary(ComputationError):
    """The right-hand side of the difference equation fails to close into a
    polynomial (an internal consistency failure)."""


class DegreeMismatch(ComputationError):
    """A derived polynomial has a degree inconsistent with the predicted
    class (an internal consistency failure)."""


class DegenerateSymmetrization(ComputationError):
    """The symmetrized functional is degenerate: its zeroth moment vanishes,
    so no orthogonal polynomial sequence exists for it."""


class SingularHankel(ComputationError):
    """A leading principal minor of the moment matrix vanishes, so the
    three-term recurrence cannot be continued.

    Attributes:
        index: order of the vanishing minor.
    """

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(
            message
            or f"Hankel determinant of order {index} vanishes; "
            f"the functional is not quasi-definite at depth {index}"
        )
