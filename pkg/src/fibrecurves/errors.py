"""Exception hierarchy shared by every module."""


class FibreError(Exception):
    """Base class for all errors raised by fibrecurves."""


class FieldError(FibreError, ValueError):
    """Invalid field parameters (non-prime, even characteristic, bad modulus)."""


class FieldMismatchError(FibreError, TypeError):
    """Arithmetic attempted between objects over different fields."""


class CardinalityError(FibreError, ValueError):
    """Requested field or enumeration exceeds the configured size limits."""


class ParseError(FibreError, ValueError):
    """Malformed field, polynomial, fixture or records text."""


class ZeroPolynomialError(FibreError, ValueError):
    """Operation undefined on the zero polynomial."""


class ValidationError(FibreError, ValueError):
    """Well-formed input that violates a mathematical precondition."""


class InvariantError(FibreError, AssertionError):
    """An internal consistency check failed; indicates a bug, never bad input."""
