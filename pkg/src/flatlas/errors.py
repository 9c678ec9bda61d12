"""Exception hierarchy.

Errors fall into three families that the command line maps onto exit codes:
input problems (2), surgery preconditions (3) and invariant breaches (1).
"""

from __future__ import annotations


class FlatlasError(Exception):
    """Base class for every error raised by the package."""


class InputError(FlatlasError):
    """Malformed or inadmissible input."""


class PreconditionError(FlatlasError):
    """A surgery was requested on a cylinder or label that does not allow it."""


class InvariantError(FlatlasError):
    """An internal invariant failed; always a bug or a counterexample."""


class ParseError(InputError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class NonBijective(InputError):
    pass


class Disconnected(InputError):
    pass


class BadIndex(InputError):
    pass


class DuplicateLabel(InputError):
    pass


class MissingLabel(InputError):
    pass


class NoPositiveWidths(InputError):
    pass


class MarkedPoint(InputError):
    pass


class InconsistentGeometry(InputError):
    pass


class InvalidInvolution(InputError):
    pass


class UnsupportedGenus(InputError):
    pass


class ZeroClass(InputError):
    pass


class NotFree(InputError):
    pass


class NotTranslation(InputError):
    pass


class BadDescriptor(InputError):
    pass


class NotPrym(InputError):
    pass


class NotSimple(PreconditionError):
    pass


class SameZero(PreconditionError):
    pass


class BadSplit(PreconditionError):
    pass


class NotRealizable(PreconditionError):
    pass


class SharedZeroPair(PreconditionError):
    pass


class UnknownCase(InvariantError):
    pass
