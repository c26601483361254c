"""Shared exception types."""


class ParamLabError(Exception):
    """Base class for all computational failures in this package."""


class InexactDivisionError(ParamLabError):
    """Polynomial division left a remainder above tolerance."""

    def __init__(self, remainder_norm, tol):
        self.remainder_norm = remainder_norm
        self.tol = tol
        super().__init__(
            f"inexact division: remainder norm {remainder_norm:.3e} exceeds tol {tol:.3e}"
        )


class ConvergenceError(ParamLabError):
    """An iterative solver failed to reach its tolerance."""

    def __init__(self, message, worst_residual=None):
        self.worst_residual = worst_residual
        super().__init__(message)


class CountMismatchError(ParamLabError):
    """A locus came back with the wrong number of points.

    This is the theorem-contradiction class of failure: the expected counts
    are exact consequences of the underlying theory, so a mismatch means
    either a numerical breakdown or a genuine contradiction and must never
    be silently absorbed.
    """

    def __init__(self, found, expected, context=""):
        self.found = found
        self.expected = expected
        self.context = context
        super().__init__(f"count mismatch{' in ' + context if context else ''}: "
                         f"found {found}, expected {expected}")


class ContinuationError(ParamLabError):
    """Newton continuation broke down along a path."""

    def __init__(self, message, center=None, t_reached=None):
        self.center = center
        self.t_reached = t_reached
        super().__init__(message)


class NearParabolicError(ParamLabError):
    """Newton refinement of a detected cycle diverged (multiplier near 1)."""


class LowerPeriodDegeneracyError(ParamLabError):
    """A Moebius denominator factor vanished: the point has lower exact period."""

    def __init__(self, divisor):
        self.divisor = divisor
        super().__init__(f"lower-period degeneracy: orbit returns already at period {divisor}")


class TransversalityError(ParamLabError):
    """An intersection Jacobian is numerically singular, contradicting transversality."""
