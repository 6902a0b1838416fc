"""Field elements carrying a p-adic valuation.

Two backends share one small protocol used by the elimination kernels:

* :class:`ExactScalar` -- an exact rational with its p-adic valuation.
* :class:`CappedScalar` -- ``p^val * unit + O(p^prec)``, an approximation
  known up to an absolute precision, with the precision propagation rules
  needed for tracking the loss in precision of row operations.

Both expose ``known_zero`` (exact zero, or a structural zero written by a
pivoting step), ``distinguishable`` (certainly nonzero) and ``valuation()``.
A capped element that is neither is *indistinguishable from zero*: it is
``O(p^prec)`` and its valuation is only bounded below by ``prec``.
"""

from __future__ import annotations

import math
from fractions import Fraction

import gmpy2
from gmpy2 import mpq, mpz

from .errors import BackendMismatch, PrecisionExhausted

INF = math.inf
_MPQ = type(mpq())


def as_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return mpq(Fraction(x.replace(" ", "")))
    return mpq(x)


def int_valuation(x, p: int) -> int | float:
    """p-adic valuation of a nonzero integer (INF for zero)."""
    if x == 0:
        return INF
    return gmpy2.remove(mpz(x), p)[1]


def rational_valuation(x, p: int) -> int | float:
    x = as_mpq(x)
    if x == 0:
        return INF
    return gmpy2.remove(x.numerator, p)[1] - gmpy2.remove(x.denominator, p)[1]


class ExactScalar:
    __slots__ = ("value", "prime", "_val")

    def __init__(self, value, prime: int):
        self.value = value if type(value) is _MPQ else as_mpq(value)
        self.prime = prime
        self._val = None

    # -- protocol -----------------------------------------------------------
    @property
    def known_zero(self) -> bool:
        return self.value == 0

    @property
    def distinguishable(self) -> bool:
        return self.value != 0

    @property
    def exact(self) -> bool:
        return True

    @property
    def precision(self):
        return INF

    def valuation(self):
        if self._val is None:
            self._val = rational_valuation(self.value, self.prime)
        return self._val

    def zero(self) -> "ExactScalar":
        return ExactScalar(mpq(0), self.prime)

    def one(self) -> "ExactScalar":
        return ExactScalar(mpq(1), self.prime)

    def to_capped(self, prec: int) -> "CappedScalar":
        return CappedScalar.from_rational(self.value, self.prime, prec)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if type(other) is not ExactScalar or other.prime != self.prime:
            raise BackendMismatch(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other):
        self._check(other)
        return ExactScalar(self.value + other.value, self.prime)

    def __sub__(self, other):
        self._check(other)
        return ExactScalar(self.value - other.value, self.prime)

    def __mul__(self, other):
        self._check(other)
        return ExactScalar(self.value * other.value, self.prime)

    def __truediv__(self, other):
        self._check(other)
        if other.value == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactScalar(self.value / other.value, self.prime)

    def __neg__(self):
        return ExactScalar(-self.value, self.prime)

    def __eq__(self, other):
        return (
            type(other) is ExactScalar
            and other.prime == self.prime
            and other.value == self.value
        )

    def __hash__(self):
        return hash((self.value, self.prime))

    def __repr__(self):
        return f"ExactScalar({self.value}, p={self.prime})"

    def __str__(self):
        return str(self.value)


class CappedScalar:
    """``p^val * unit + O(p^prec)`` with ``unit`` a p-adic unit mod ``p^(prec-val)``.

    When the element is indistinguishable from zero, ``unit == 0`` and
    ``val == prec``. Structural zeros (entries cleared symbolically by a
    pivot) have ``val == prec == INF``.
    """

    __slots__ = ("prime", "val", "unit", "prec")

    def __init__(self, prime: int, val, unit, prec):
        self.prime = prime
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- constructors -------------------------------------------------------
    @classmethod
    def normalized(cls, p: int, val: int, u, prec) -> "CappedScalar":
        """Build from ``p^val * u + O(p^prec)`` for any integer ``u``."""
        if prec == INF:
            raise ValueError("use structural_zero() for infinite precision")
        if u == 0 or val >= prec:
            return cls(p, prec, mpz(0), prec)
        u, k = gmpy2.remove(mpz(u), p)
        val += k
        if val >= prec:
            return cls(p, prec, mpz(0), prec)
        return cls(p, val, u % (mpz(p) ** (prec - val)), prec)

    @classmethod
    def from_rational(cls, x, p: int, prec: int) -> "CappedScalar":
        x = as_mpq(x)
        if x == 0:
            return cls.zero_at(p, prec)
        num, a = gmpy2.remove(x.numerator, p)
        den, b = gmpy2.remove(x.denominator, p)
        val = a - b
        if val >= prec:
            return cls.zero_at(p, prec)
        mod = mpz(p) ** (prec - val)
        return cls(p, val, (num * gmpy2.invert(den, mod)) % mod, prec)

    @classmethod
    def zero_at(cls, p: int, prec: int) -> "CappedScalar":
        return cls(p, prec, mpz(0), prec)

    @classmethod
    def structural_zero(cls, p: int) -> "CappedScalar":
        return cls(p, INF, mpz(0), INF)

    # -- protocol -----------------------------------------------------------
    @property
    def is_structural_zero(self) -> bool:
        return self.prec == INF

    @property
    def known_zero(self) -> bool:
        return self.prec == INF

    @property
    def distinguishable(self) -> bool:
        return self.unit != 0

    @property
    def indistinguishable(self) -> bool:
        return self.unit == 0 and self.prec != INF

    @property
    def exact(self) -> bool:
        return False

    @property
    def precision(self):
        return self.prec

    @property
    def valuation_known(self) -> bool:
        return self.unit != 0 or self.prec == INF

    def valuation(self):
        """Exact valuation, or the lower bound ``prec`` for ``O(p^prec)``."""
        return self.val

    @property
    def mantissa(self):
        """Integer representative ``p^val * unit`` (only for ``val >= 0``)."""
        return self.unit * mpz(self.prime) ** self.val

    def lift(self) -> mpq:
        """Rational representative of the known digits."""
        if self.unit == 0:
            return mpq(0)
        if self.val >= 0:
            return mpq(self.unit * mpz(self.prime) ** self.val)
        return mpq(self.unit, mpz(self.prime) ** (-self.val))

    def zero(self) -> "CappedScalar":
        return CappedScalar.structural_zero(self.prime)

    def truncate(self, prec: int) -> "CappedScalar":
        """Forget digits at or beyond ``prec``."""
        if prec >= self.prec:
            return self
        return CappedScalar.from_rational(self.lift(), self.prime, prec)

    def agrees_with(self, x) -> bool:
        """True if the exact rational ``x`` lies in this p-adic ball."""
        if self.prec == INF:
            return as_mpq(x) == 0
        return rational_valuation(as_mpq(x) - self.lift(), self.prime) >= self.prec

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other):
        if type(other) is not CappedScalar or other.prime != self.prime:
            raise BackendMismatch(f"cannot combine {self!r} with {other!r}")

    def __add__(self, other):
        self._check(other)
        if self.prec == INF:
            return other
        if other.prec == INF:
            return self
        p = self.prime
        prec = min(self.prec, other.prec)
        v = min(self.val, other.val)
        s = self.unit * mpz(p) ** (self.val - v) + other.unit * mpz(p) ** (other.val - v)
        return CappedScalar.normalized(p, v, s, prec)

    def __neg__(self):
        if self.unit == 0:
            return self
        mod = mpz(self.prime) ** (self.prec - self.val)
        return CappedScalar(self.prime, self.val, (-self.unit) % mod, self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        if self.prec == INF or other.prec == INF:
            return CappedScalar.structural_zero(self.prime)
        val = self.val + other.val
        prec = min(self.prec + other.val, other.prec + self.val)
        return CappedScalar.normalized(self.prime, val, self.unit * other.unit, prec)

    def __truediv__(self, other):
        self._check(other)
        if other.prec == INF:
            raise ZeroDivisionError("division by a structural zero")
        if other.unit == 0:
            raise PrecisionExhausted(
                f"division by {other}, which is indistinguishable from zero"
            )
        if self.prec == INF:
            return self
        if self.unit == 0:
            return CappedScalar.zero_at(self.prime, self.prec - other.val)
        val = self.val - other.val
        # relative precision of a quotient is the smaller of the two
        prec = val + min(self.prec - self.val, other.prec - other.val)
        mod = mpz(self.prime) ** (prec - val)
        u = (self.unit * gmpy2.invert(other.unit, mod)) % mod
        return CappedScalar(self.prime, val, u, prec)

    def __eq__(self, other):
        return (
            type(other) is CappedScalar
            and other.prime == self.prime
            and other.val == self.val
            and other.unit == self.unit
            and other.prec == self.prec
        )

    def __hash__(self):
        return hash((self.prime, self.val, self.unit, self.prec))

    def __repr__(self):
        return f"CappedScalar({self})"

    def __str__(self):
        p = self.prime
        if self.prec == INF:
            return "0"
        big_o = f"O({p}^{self.prec})"
        if self.unit == 0:
            return big_o
        return f"{self.lift()} + {big_o}"


def valuation(a):
    """Valuation of a scalar of either backend; INF for an exact zero."""
    return a.valuation()
