"""Exception hierarchy.

Two families: ``ValueError`` subclasses for bad input, and
``InvariantViolation`` subclasses for checks that can only fail if the
implementation is wrong, since the mathematics guarantees them.
"""


class KronredError(Exception):
    pass


class InputError(KronredError, ValueError):
    pass


class NonSquare(InputError):
    pass


class BadSize(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class Singular(InputError):
    pass


class NotAMorphism(InputError):
    pass


class UnsupportedBackend(InputError):
    pass


class ParseError(InputError):
    """Malformed input document or matrix entry."""


class ShapeError(ShapeMismatch):
    pass


class BackendError(UnsupportedBackend):
    """An analysis was requested on a backend that does not support it."""


class NotStalled(KronredError):
    """A chain did not stabilize within the depth cap."""


class InvariantViolation(KronredError, AssertionError):
    pass


class IllFormed(InvariantViolation):
    pass


class CommutationViolation(InvariantViolation):
    pass


class EquivalenceViolation(InvariantViolation):
    pass


class MonotonicityViolation(InvariantViolation):
    pass


class IdentityViolation(InvariantViolation):
    pass


class NonInvertibleCore(InvariantViolation):
    pass


class ExactnessViolation(InvariantViolation):
    pass
