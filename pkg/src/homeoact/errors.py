from __future__ import annotations


class HomeoactError(Exception):
    """Base class for every error raised by homeoact."""


class ValidationFailure(HomeoactError):
    """An input violates one of the invariants of its type."""


class NonMonotone(ValidationFailure):
    """Some linear piece of a map has a non-positive slope."""


class OutOfRange(ValidationFailure):
    """A coordinate lies outside its admissible range."""


class BadRadius(ValidationFailure):
    """A bump radius outside (0, 1/2)."""


class SignMismatch(ValidationFailure):
    """The sign assignment does not have one sign per gap."""


class BadIndex(ValidationFailure):
    """A gap index which does not exist."""


class PatternMismatch(ValidationFailure):
    """No block matching exists for the requested orientation."""


class GeneratorNotInStabilizer(ValidationFailure):
    """A generator does not fix a neighbourhood of the anchor angle."""


class ParseFailure(HomeoactError, ValueError):
    """A document or a rational could not be read."""


class RecoveryFailure(HomeoactError):
    """A recovery algorithm could not certify its answer."""


class Inconclusive(RecoveryFailure):
    """Every displacement probe on a gap returned zero."""


class NoShrink(RecoveryFailure):
    """Fixed-set enclosures stopped shrinking along the schedule."""


class EmptyFixedSet(RecoveryFailure):
    """The stabilizer sample has no fixed point on the probed fiber."""
