"""Shared exception types.

Every failure mode that callers are expected to branch on gets its own
class; anything else is a plain ValueError/AssertionError bug.
"""


class StrataError(Exception):
    """Base class for all package errors."""


class InvalidInput(StrataError):
    """A precondition on user-supplied data was violated."""


class InvalidKind(InvalidInput):
    """Operation applied to a bilinear space of the wrong kind."""


class Unsupported(StrataError):
    """Request is outside the supported parameter range (e.g. p = 2)."""


class UnsupportedInput(Unsupported):
    """Input is well-formed but the algorithm does not cover it."""


class ResourceLimit(StrataError):
    """An enumeration exceeded its configured budget."""


class NotAVertex(InvalidInput):
    """No homothety representative satisfies the vertex condition."""


class RealizationFailure(StrataError):
    """No nondegenerate invariant form exists for the requested operator."""

    def __init__(self, msg, solution_dim=None):
        super().__init__(msg)
        self.solution_dim = solution_dim


class InternalInvariantViolation(StrataError):
    """A property the implementation relies on failed; indicates a bug."""
