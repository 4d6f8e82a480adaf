"""Exception hierarchy.

``InputError`` covers malformed data (exit code 2 in the CLI); ``MathError``
covers violated mathematical preconditions (exit code 3).
"""


class NinePointsError(Exception):
    pass


class InputError(NinePointsError, ValueError):
    """Malformed input: mixed fields, bad shapes, unparsable files."""


class InvalidPointError(InputError):
    """All homogeneous coordinates are zero."""


class MathError(NinePointsError):
    """A mathematical precondition failed."""


class UnsupportedSizeError(MathError):
    pass


class NotInGeneralPositionError(MathError):
    pass


class InvalidTransformError(MathError):
    pass


class CoincidentPointsError(MathError):
    pass


class AmbiguousCubicError(MathError):
    """More than one cubic (up to scaling) passes through the points."""

    def __init__(self, message, basis=()):
        super().__init__(message)
        self.basis = tuple(basis)


class SingularCubicError(MathError):
    pass


class NotOnCurveError(MathError):
    pass


class InvalidDivisorError(MathError):
    pass


class InsufficientBoundError(MathError):
    pass


class CollisionError(MathError):
    """The computed ninth point coincides with one of the seeds."""


class RealizabilityError(MathError):
    pass


class InconsistencyError(MathError):
    """An internal identity failed; signals a violated precondition upstream."""
