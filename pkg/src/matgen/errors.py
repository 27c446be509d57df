"""Exception hierarchy.

Errors split into two families: :class:`DomainError` subclasses signal that a
well-posed question could not be answered over the given field (the CLI maps
them to exit code 3), while the remaining errors are caller mistakes.
"""

from __future__ import annotations


class MatgenError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MatgenError):
    """The computation is well-formed but cannot be decided in this setting."""


class NotSplit(DomainError):
    """An eigenvalue computation leaves the ground field."""


class Inconclusive(DomainError):
    """Heuristic search exhausted over an infinite field."""


class CapExceeded(DomainError):
    """A configured size cap was hit."""


class DivisionByZero(MatgenError, ZeroDivisionError):
    pass


class FieldMismatch(MatgenError, ValueError):
    pass


class InfiniteField(MatgenError, ValueError):
    pass


class DimensionMismatch(MatgenError, ValueError):
    pass


class AmbientMismatch(DimensionMismatch):
    pass


class NotSquare(DimensionMismatch):
    pass


class SingularMatrix(MatgenError, ValueError):
    pass


class SingularConjugator(SingularMatrix):
    pass


class ZeroScale(MatgenError, ValueError):
    pass


class BadSize(MatgenError, ValueError):
    pass


class NotGenerating(MatgenError, ValueError):
    pass


class NotIrredundant(MatgenError, ValueError):
    pass


class DegenerateAlpha(MatgenError, ValueError):
    pass


class UnsupportedField(MatgenError, ValueError):
    pass


class InternalPatternFailure(MatgenError, AssertionError):
    """A configuration contradicts a proven structure theorem (a bug)."""


class CentralizerTooBig(MatgenError, AssertionError):
    pass
