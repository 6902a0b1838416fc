"""Exception hierarchy shared by every module."""


class TropicalError(Exception):
    pass


class BackendMismatch(TropicalError, TypeError):
    """Operands come from different scalar backends or different primes."""


class PrecisionError(TropicalError, ArithmeticError):
    """A decision needed more p-adic digits than the data carries."""

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location

    def with_location(self, location):
        self.location = location
        return self

    def __str__(self):
        msg = super().__str__()
        if self.location is not None:
            return f"{msg} (at {self.location})"
        return msg


class IncomparableAtPrecision(PrecisionError):
    """Two terms cannot be ordered because a coefficient is only known as O(p^m)."""


class PrecisionExhausted(PrecisionError):
    """Elimination hit an entry or row indistinguishable from zero."""


class ZeroPolynomialError(TropicalError, ValueError):
    pass


class NonHomogeneousError(TropicalError, ValueError):
    pass
