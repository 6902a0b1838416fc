"""Labeled Macaulay matrices.

Rows are dense lists of scalars over a column label list ``mon`` of all
degree-d monomials. Each row remembers where it came from (generator index
and multiplier) and, for the signature-based driver, its signature.
"""

from __future__ import annotations

from math import comb
from typing import NamedTuple

from .errors import ZeroPolynomialError
from .poly import HomogeneousPoly, Monomial, TropicalOrder, format_monomial, mmul


class Signature(NamedTuple):
    monomial: Monomial
    index: int  # 1-based generator index


class Provenance(NamedTuple):
    index: int  # 1-based generator index
    multiplier: Monomial


def signature_key(sig: Signature, order: TropicalOrder) -> tuple:
    return (sig.index, order.monomial_key(sig.monomial))


def signature_compare(s1: Signature, s2: Signature, order: TropicalOrder) -> int:
    """Index first, then the tropical order on unit-coefficient monomials."""
    k1, k2 = signature_key(s1, order), signature_key(s2, order)
    return (k1 > k2) - (k1 < k2)


class MacaulayMatrix:
    def __init__(self, rows, mon, degree, zero, signatures=None, provenance=None):
        self.rows = rows
        self.mon = list(mon)
        self.degree = degree
        self.zero = zero
        self.signatures = signatures
        self.provenance = provenance if provenance is not None else [None] * len(rows)
        if signatures is not None and len(signatures) != len(rows):
            raise ValueError("one signature per row is required")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.mon)

    @property
    def n(self) -> int:
        return len(self.mon[0])

    def is_macaulay(self, order: TropicalOrder) -> bool:
        """True when the labels are sorted decreasingly (else merely labeled)."""
        keys = [order.monomial_key(m) for m in self.mon]
        return all(a > b for a, b in zip(keys, keys[1:]))

    def signatures_increasing(self, order: TropicalOrder) -> bool:
        if self.signatures is None:
            return True
        keys = [signature_key(s, order) for s in self.signatures]
        return all(a < b for a, b in zip(keys, keys[1:]))

    def row_as_poly(self, i: int) -> HomogeneousPoly:
        return row_as_poly(self.rows[i], self.mon, self.degree)

    def polys(self) -> list:
        return [self.row_as_poly(i) for i in range(self.nrows)]

    def relabeled(self, mon) -> "MacaulayMatrix":
        """Same rows with columns reordered to follow ``mon``."""
        pos = {m: j for j, m in enumerate(self.mon)}
        perm = [pos[m] for m in mon]
        rows = [[r[j] for j in perm] for r in self.rows]
        return MacaulayMatrix(
            rows, mon, self.degree, self.zero,
            None if self.signatures is None else list(self.signatures),
            list(self.provenance),
        )

    def subset(self, indices) -> "MacaulayMatrix":
        return MacaulayMatrix(
            [list(self.rows[i]) for i in indices], self.mon, self.degree, self.zero,
            None if self.signatures is None else [self.signatures[i] for i in indices],
            [self.provenance[i] for i in indices],
        )

    def copy(self) -> "MacaulayMatrix":
        return self.subset(range(self.nrows))

    def dump(self, names=None) -> str:
        """One line per row: ``sig=(m,i) | prov=a*f_i | c1 c2 ...``."""
        lines = ["mon: " + " ".join(format_monomial(m, names) for m in self.mon)]
        for k, row in enumerate(self.rows):
            sig = "-"
            if self.signatures is not None:
                s = self.signatures[k]
                sig = f"({format_monomial(s.monomial, names)},{s.index})"
            prov = self.provenance[k]
            prov = "-" if prov is None else f"{format_monomial(prov.multiplier, names)}*f_{prov.index}"
            lines.append(f"sig={sig} | prov={prov} | " + " ".join(f"[{c}]" for c in row))
        return "\n".join(lines)


def row_as_poly(row, mon, degree) -> HomogeneousPoly:
    return HomogeneousPoly(len(mon[0]), degree, {m: c for m, c in zip(mon, row)})


def poly_as_row(f: HomogeneousPoly, mon, zero) -> list:
    pos = {m: j for j, m in enumerate(mon)}
    row = [zero] * len(mon)
    for m, c in f.terms.items():
        if m not in pos:
            raise KeyError(f"monomial {m} is not a column label")
        row[pos[m]] = c
    return row


def macaulay_row_count(n: int, d: int, degrees) -> int:
    return sum(comb(n + d - di - 1, n - 1) for di in degrees if di <= d)


def zero_of(F) -> object:
    for f in F:
        for c in f.terms.values():
            return c.zero()
    raise ZeroPolynomialError("cannot build a Macaulay matrix from zero polynomials")


def multiple_row(f: HomogeneousPoly, alpha: Monomial, mon, zero) -> list:
    return poly_as_row(f.multiply_by_monomial(alpha), mon, zero)


def build_full_macaulay(F, d: int, order: TropicalOrder, zero=None) -> MacaulayMatrix:
    """Mac_d(f_1..f_s): blocks by generator, multipliers ascending in each block."""
    for f in F:
        if f.is_zero():
            raise ZeroPolynomialError("zero polynomial among the generators")
    zero = zero if zero is not None else zero_of(F)
    n = order.n
    mon = order.enumerate_monomials(d)
    rows, sigs, prov = [], [], []
    for i, f in enumerate(F, start=1):
        if f.degree > d:
            continue
        for alpha in reversed(order.enumerate_monomials(d - f.degree)):
            rows.append(multiple_row(f, alpha, mon, zero))
            sigs.append(Signature(alpha, i))
            prov.append(Provenance(i, alpha))
    M = MacaulayMatrix(rows, mon, d, zero, sigs, prov)
    assert len(mon) == comb(n + d - 1, n - 1)
    return M


def check_provenance(M: MacaulayMatrix, F) -> bool:
    """Every row equals x^alpha f_i for its recorded provenance."""
    for row, pv in zip(M.rows, M.provenance):
        expected = multiple_row(F[pv.index - 1], pv.multiplier, M.mon, M.zero)
        if any(a != b for a, b in zip(row, expected)):
            return False
    return True


def multiply_row_by_variable(row, mon, var: int, target_pos: dict, zero) -> list:
    """Coefficients of ``x_var * row`` in the degree-(d+1) column basis."""
    out = [zero] * len(target_pos)
    for m, c in zip(mon, row):
        if not c.known_zero:
            mm = list(m)
            mm[var] += 1
            out[target_pos[tuple(mm)]] = c
    return out


__all__ = [
    "MacaulayMatrix", "Signature", "Provenance", "build_full_macaulay", "row_as_poly",
    "poly_as_row", "signature_compare", "signature_key", "macaulay_row_count",
    "check_provenance", "mmul", "zero_of",
]
