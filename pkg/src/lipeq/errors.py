"""Exception types raised by the lipeq engine."""


class LipeqError(Exception):
    """Base class for all engine errors."""


class InputError(LipeqError, ValueError):
    """Malformed or out-of-contract input."""


class ZeroPolynomial(InputError):
    pass


class DivideByZero(LipeqError, ZeroDivisionError):
    pass


class NotDivisible(LipeqError, ArithmeticError):
    pass


class RootCountNotOne(LipeqError):
    pass


class UnsupportedIndex(InputError):
    pass


class DegenerateInput(InputError):
    pass


class BadOrdering(InputError):
    pass


class ExceptionalContractViolated(LipeqError):
    """A theorem-predicted factorization did not divide exactly."""


class ValueAbsent(InputError):
    pass


class PatternAbsent(InputError):
    pass


class KraftViolation(InputError):
    pass


class CertificateError(LipeqError):
    """An Equivalent verdict produced a certificate that failed re-verification."""
