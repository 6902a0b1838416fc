"""Monomials, terms, homogeneous polynomials and tropical term orders.

Monomials are plain tuples of exponents. A term ``a*x^alpha`` is ranked by
its *value* ``val(a) + w.alpha``: a smaller value means a greater term, and
equal values fall back to a classical monomial order (grevlex or lex).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from .errors import IncomparableAtPrecision, NonHomogeneousError, ZeroPolynomialError

Monomial = tuple


def mdeg(m: Monomial) -> int:
    return sum(m)


def mmul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mquo(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def unit_monomial(n: int) -> Monomial:
    return (0,) * n


def variable(n: int, k: int) -> Monomial:
    return tuple(1 if j == k else 0 for j in range(n))


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple:
    """All exponent vectors of length n summing to d (lex-descending)."""
    if n == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - first):
            out.append((first,) + rest)
    return tuple(out)


def format_monomial(m: Monomial, names=None) -> str:
    names = names or [f"x{k + 1}" for k in range(len(m))]
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


TIEBREAKS = ("grevlex", "lex")


@dataclass(frozen=True)
class TropicalOrder:
    weight: tuple
    tiebreak: str = "grevlex"

    def __post_init__(self):
        object.__setattr__(self, "weight", tuple(int(x) for x in self.weight))
        if self.tiebreak not in TIEBREAKS:
            raise ValueError(f"unknown monomial order {self.tiebreak!r}")

    @property
    def n(self) -> int:
        return len(self.weight)

    def wdot(self, m: Monomial) -> int:
        return sum(a * b for a, b in zip(self.weight, m))

    def tiebreak_key(self, m: Monomial) -> tuple:
        # larger key = greater monomial; grevlex compares degrees first
        if self.tiebreak == "lex":
            return tuple(m)
        return (sum(m),) + tuple(-e for e in reversed(m))

    def monomial_key(self, m: Monomial) -> tuple:
        """Sort key of the unit-coefficient term ``x^m``; larger is greater."""
        return (-self.wdot(m), self.tiebreak_key(m))

    def term_key(self, value: int, m: Monomial) -> tuple:
        return (-value, self.tiebreak_key(m))

    def enumerate_monomials(self, d: int) -> list:
        return enumerate_monomials(self.n, d, self)

    def describe(self) -> str:
        return f"w={list(self.weight)} tiebreak={self.tiebreak}"


def enumerate_monomials(n: int, d: int, order: TropicalOrder) -> list:
    """Degree-d monomials in decreasing order (by w.alpha, then tiebreak)."""
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    return sorted(monomials_of_degree(n, d), key=order.monomial_key, reverse=True)


@dataclass(frozen=True)
class Term:
    coeff: object
    monomial: Monomial

    def __post_init__(self):
        if self.coeff.known_zero:
            raise ValueError("a term needs a nonzero coefficient")


class TermValue(NamedTuple):
    value: int
    lower_bound: bool  # True when the coefficient is O(p^m)


class Comparison(NamedTuple):
    sign: int  # 1: first is greater, -1: first is smaller, 0: same rank
    tiebroken: bool  # values were equal and the monomial order decided


def term_value(t: Term, order: TropicalOrder) -> TermValue:
    bounded = not t.coeff.distinguishable
    return TermValue(t.coeff.valuation() + order.wdot(t.monomial), bounded)


def compare_terms(t1: Term, t2: Term, order: TropicalOrder) -> Comparison:
    v1 = term_value(t1, order)
    v2 = term_value(t2, order)
    if v1.lower_bound or v2.lower_bound:
        # O(p^m) x^b is smaller than a x^a only when m + w.b > val(a) + w.a
        if v1.lower_bound and not v2.lower_bound and v1.value > v2.value:
            return Comparison(-1, False)
        if v2.lower_bound and not v1.lower_bound and v2.value > v1.value:
            return Comparison(1, False)
        raise IncomparableAtPrecision(
            f"cannot order {t1.coeff}*x^{t1.monomial} and {t2.coeff}*x^{t2.monomial}"
        )
    if v1.value != v2.value:
        return Comparison(1 if v1.value < v2.value else -1, False)
    if t1.monomial == t2.monomial:
        return Comparison(0, False)
    k1, k2 = order.tiebreak_key(t1.monomial), order.tiebreak_key(t2.monomial)
    return Comparison(1 if k1 > k2 else -1, True)


class HomogeneousPoly:
    """Homogeneous polynomial in n variables as a monomial -> scalar map.

    Known zeros are dropped; capped coefficients indistinguishable from
    zero are kept, since they still carry precision information.
    """

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n: int, degree: int, terms=None):
        self.n = n
        self.degree = degree
        self.terms = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n:
                raise ValueError(f"monomial {m} does not have {n} exponents")
            if sum(m) != degree:
                raise NonHomogeneousError(
                    f"monomial {m} has degree {sum(m)}, expected {degree}"
                )
            if not c.known_zero:
                self.terms[m] = c

    @classmethod
    def from_terms(cls, terms: dict, n: int | None = None):
        if not terms:
            raise ValueError("cannot infer the degree of an empty polynomial")
        first = next(iter(terms))
        return cls(n or len(first), sum(first), terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, HomogeneousPoly)
            and self.n == other.n
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.degree, frozenset(self.terms.items())))

    def coefficient(self, m: Monomial):
        return self.terms.get(tuple(m))

    def leading_term(self, order: TropicalOrder) -> Term:
        if not self.terms:
            raise ZeroPolynomialError("the zero polynomial has no leading term")
        best = None
        best_key = None
        lower = None  # smallest value lower bound among O(p^m) coefficients
        for m, c in self.terms.items():
            v = c.valuation() + order.wdot(m)
            if not c.distinguishable:
                lower = v if lower is None else min(lower, v)
                continue
            key = order.term_key(v, m)
            if best_key is None or key > best_key:
                best, best_key = m, key
        if best is None:
            raise IncomparableAtPrecision(
                "every coefficient is indistinguishable from zero"
            )
        if lower is not None and lower <= -best_key[0]:
            raise IncomparableAtPrecision(
                f"leading term undetermined: an O(p^m) term may exceed value {-best_key[0]}"
            )
        return Term(self.terms[best], best)

    def leading_monomial(self, order: TropicalOrder) -> Monomial:
        return self.leading_term(order).monomial

    def multiply_by_monomial(self, m: Monomial) -> "HomogeneousPoly":
        return HomogeneousPoly(
            self.n,
            self.degree + sum(m),
            {mmul(a, m): c for a, c in self.terms.items()},
        )

    def scale(self, c) -> "HomogeneousPoly":
        return HomogeneousPoly(
            self.n, self.degree, {m: a * c for m, a in self.terms.items()}
        )

    def normalized(self, order: TropicalOrder) -> "HomogeneousPoly":
        """Divide by the leading coefficient (meant for the exact backend)."""
        lt = self.leading_term(order)
        inv = lt.coeff.one() / lt.coeff
        return self.scale(inv)

    def sorted_items(self, order: TropicalOrder) -> list:
        """Terms by decreasing monomial position in the column ordering."""
        return sorted(
            self.terms.items(), key=lambda mc: order.monomial_key(mc[0]), reverse=True
        )

    def format(self, names=None, order: TropicalOrder | None = None) -> str:
        if not self.terms:
            return "0"
        items = self.sorted_items(order) if order else sorted(self.terms.items(), reverse=True)
        out = []
        for m, c in items:
            mon = format_monomial(m, names)
            coeff = str(c)
            if " " in coeff or "/" in coeff or coeff.startswith("-") or coeff.startswith("O("):
                coeff = f"({coeff})"
            if mon == "1":
                out.append(coeff)
            elif coeff == "1":
                out.append(mon)
            else:
                out.append(f"{coeff}*{mon}")
        return " + ".join(out)

    def __repr__(self):
        return f"HomogeneousPoly({self.format()})"


def leading_term(f: HomogeneousPoly, order: TropicalOrder) -> Term:
    return f.leading_term(order)


def leading_monomial(f: HomogeneousPoly, order: TropicalOrder) -> Monomial:
    return f.leading_term(order).monomial


def multiply_by_monomial(f: HomogeneousPoly, m: Monomial) -> HomogeneousPoly:
    return f.multiply_by_monomial(m)
