"""Ground truth for testing the drivers.

``full_macaulay_dgb`` reduces the complete Macaulay matrices degree by
degree, with no F5 filtering and no signatures. ``hilbert_regularity_check``
compares Macaulay ranks, computed by a separate plain-Fraction elimination,
with the Hilbert series of a regular sequence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .macaulay import build_full_macaulay, row_as_poly, zero_of
from .poly import HomogeneousPoly, Term, TropicalOrder, divides
from .reduction import tropical_row_echelon


@dataclass(frozen=True)
class MonomialIdeal:
    generators: tuple

    @classmethod
    def from_monomials(cls, lms):
        from .mf5 import minimalize_lm

        return cls(tuple(minimalize_lm(lms)))

    def __contains__(self, m) -> bool:
        return monomial_in_ideal(m, self)


def monomial_in_ideal(m, J) -> bool:
    gens = J.generators if isinstance(J, MonomialIdeal) else J
    return any(divides(g, m) for g in gens)


@dataclass
class OracleResult:
    lm_by_degree: dict
    ranks: dict
    basis: list  # (degree, HomogeneousPoly, Term)

    def lm_sets(self) -> dict:
        return {d: frozenset(v) for d, v in self.lm_by_degree.items()}


def full_macaulay_dgb(F, D: int, order: TropicalOrder) -> OracleResult:
    """LM(I) in each degree d <= D from the reduced full Macaulay matrices."""
    zero = zero_of(F)
    if not zero.exact:
        raise TypeError("the oracle runs over the exact backend only")
    lm_by_degree, ranks, basis = {}, {}, []
    seen = set()
    for d in range(D + 1):
        gens = [f for f in F if f.degree <= d]
        if not gens:
            lm_by_degree[d], ranks[d] = [], 0
            continue
        M = build_full_macaulay(gens, d, order, zero)
        Mt, trace = tropical_row_echelon(M, order)
        lms = trace.leading_monomials()
        lm_by_degree[d] = sorted(lms, key=order.monomial_key, reverse=True)
        ranks[d] = trace.rank
        for k, p in enumerate(trace.pivots):
            if p.monomial not in seen:
                seen.add(p.monomial)
                basis.append((d, row_as_poly(Mt.rows[k], Mt.mon, d), Term(p.scalar, p.monomial)))
    return OracleResult(lm_by_degree, ranks, basis)


def fraction_rank(rows) -> int:
    """Rank of a list of Fraction rows by plain Gaussian elimination."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, len(rows)):
            if rows[r][c] != 0:
                q = rows[r][c] / rows[rank][c]
                rows[r] = [a - q * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _fraction_macaulay(F, d, n):
    from .poly import monomials_of_degree

    mon = monomials_of_degree(n, d)
    pos = {m: j for j, m in enumerate(mon)}
    rows = []
    for f in F:
        if f.degree > d:
            continue
        for a in monomials_of_degree(n, d - f.degree):
            row = [Fraction(0)] * len(mon)
            for m, c in f.terms.items():
                row[pos[tuple(x + y for x, y in zip(m, a))]] = Fraction(int(c.value.numerator), int(c.value.denominator))
            rows.append(row)
    return rows


def hilbert_series_coefficients(degrees, n: int, D: int) -> list:
    """Coefficients h_0..h_D of prod(1 - t^d_i) / (1 - t)^n."""
    num = [1] + [0] * D
    for di in degrees:
        nxt = list(num)
        for k in range(di, D + 1):
            nxt[k] -= num[k - di]
        num = nxt
    return [sum(num[j] * comb(n - 1 + k - j, n - 1) for j in range(k + 1)) for k in range(D + 1)]


@dataclass
class RegularityVerdict:
    regular: bool
    degree_bound: int
    expected_dims: list
    observed_dims: list

    def __bool__(self):
        return self.regular


def hilbert_regularity_check(F, D: int | None = None) -> RegularityVerdict:
    """Compare dim(<F> cap A_d) with the regular-sequence prediction for d <= D."""
    n = F[0].n
    degrees = [f.degree for f in F]
    if D is None:
        D = sum(d - 1 for d in degrees) + 1
    h = hilbert_series_coefficients(degrees, n, D)
    expected = [comb(n + d - 1, n - 1) - h[d] for d in range(D + 1)]
    observed = []
    for d in range(D + 1):
        rows = _fraction_macaulay(F, d, n)
        observed.append(fraction_rank(rows) if rows else 0)
    return RegularityVerdict(expected == observed, D, expected, observed)


__all__ = [
    "MonomialIdeal", "monomial_in_ideal", "full_macaulay_dgb", "hilbert_regularity_check",
    "hilbert_series_coefficients", "fraction_rank", "OracleResult", "HomogeneousPoly",
]
