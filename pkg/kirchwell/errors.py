"""
Exceptions raised by kirchwell. The command line maps each family to an
exit code so scripts can tell a bad argument from a failed hypothesis or a
solver that did not converge.
"""


class KirchwellError(Exception):

    """Base class for every failure kirchwell reports."""

    #: Exit code used by the command line.
    exit_code = 1


class GridError(KirchwellError, ValueError):

    """A grid specification violates its invariants."""

    exit_code = 3


class GridMismatchError(GridError):

    """A field was used on a grid it does not belong to."""


class ProblemError(KirchwellError, ValueError):

    """Bad problem parameters or an unknown canonical name."""

    exit_code = 3


class ConditionError(KirchwellError):

    """A hypothesis (V1), (V2), (D1), (D2), (H3) or a regime precondition
    does not hold for the problem at hand."""

    exit_code = 1


class SolverError(KirchwellError):

    """An iteration did not converge or hit its cap."""

    exit_code = 2


class GeometryError(SolverError):

    """The mountain-pass geometry could not be exhibited numerically."""


class ContinuationError(SolverError):

    """The arclength corrector failed after all step halvings."""
