"""Exception types shared across the package."""


class ZelcalcError(Exception):
    """Base class for all package errors."""


class NotLinked(ZelcalcError):
    """Intersection-union requested for a pair that is not linked."""


class NotPresent(ZelcalcError):
    """A segment required with multiplicity is absent from the multisegment."""


class InapplicableRemoval(ZelcalcError):
    """The removal process has no starting segment (the derivative vanishes)."""


class VanishingDerivative(ZelcalcError):
    """A derivative sequence vanished where a nonzero one was required."""


class NotCommutative(ZelcalcError):
    """A strongly commutative triple was required but the check failed."""


class RankMismatch(ZelcalcError):
    """Branching requires rank(pi) == rank(pi') + 1."""


class SymmetryViolation(ZelcalcError):
    """relevant(a, b) disagreed with relevant(b, a); engine bug."""


class DualityViolation(ZelcalcError):
    """relevant(a, b) disagreed with relevant(dual a, dual b); engine bug."""


class LimitExceeded(ZelcalcError):
    """Enumeration request above the configured support-size limit."""


class NonUniqueDerivative(ZelcalcError):
    """Inversion search found two inverses for one integral; engine bug."""


class OutOfRange(ZelcalcError):
    """Index outside 0..rank for a derivative-layer request."""


class ParseError(ZelcalcError):
    """Malformed textual input.

    Carries the position of the failure and what was expected there.
    """

    def __init__(self, message, pos, expected=None):
        self.pos = pos
        self.expected = expected
        detail = f"{message} at position {pos}"
        if expected:
            detail += f" (expected {expected})"
        super().__init__(detail)
