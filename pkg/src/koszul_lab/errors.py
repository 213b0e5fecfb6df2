"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class KoszulLabError(Exception):
    """Base class for every error raised by this package."""


class DivisionByZero(KoszulLabError, ZeroDivisionError):
    pass


class SpecMismatch(KoszulLabError, ValueError):
    pass


class ZeroPolynomial(KoszulLabError, ValueError):
    pass


class AmbientMismatch(KoszulLabError, ValueError):
    pass


class NotInSpan(KoszulLabError):
    pass


class DegreeUnavailable(KoszulLabError):
    pass


class RankDeficientParametrization(KoszulLabError, ValueError):
    pass


class ConicSpaceDegenerate(KoszulLabError):
    pass


class FormatVersionMismatch(KoszulLabError):
    pass


class MalformedFile(KoszulLabError):
    pass


class CharacteristicBoundError(KoszulLabError):
    """The requested characteristic lies below the bound a suite needs."""


class DegenerateModel(KoszulLabError):
    """A random draw failed a genericity predicate; callers retry with a new seed."""


class HilbertMismatch(DegenerateModel):
    pass


class SpecialtyViolation(DegenerateModel):
    pass


class InsufficientPoints(KoszulLabError):
    """Not enough rational points; callers escalate the field extension."""


class RetriesExhausted(KoszulLabError):
    """A retry budget ran out; signals that (p, m) should be escalated."""
