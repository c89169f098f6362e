"""Exception types raised by fplab.

All of them derive from :class:`FieldError`, itself a :class:`ValueError`,
so callers can catch precondition failures with a single clause.
"""


class FieldError(ValueError):
    """Base class for arithmetic precondition failures."""


class CompositeModulus(FieldError):
    pass


class EvenModulus(FieldError):
    pass


class TooLarge(FieldError):
    """Input exceeds the desk-scale limits of the requested algorithm."""


class ZeroArgument(FieldError):
    pass


class NotADivisor(FieldError):
    pass


class ZeroDilation(FieldError):
    pass


class ZeroScalar(FieldError):
    pass


class ZeroCoefficient(FieldError):
    pass


class NotATrinomial(FieldError):
    pass


class EmptySet(FieldError):
    pass


class EmptyRatioSet(FieldError):
    """Every pair in the ratio set had a vanishing denominator."""


class BaseDivisibleByP(FieldError):
    pass


class InvalidPolynomial(FieldError):
    pass


class OutOfRange(FieldError):
    pass
