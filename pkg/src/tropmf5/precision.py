"""Precision bounds for tropical Matrix-F5 over Q_p.

For each step (d, i) of the naive driver run with ``carry='raw'``:

* ``delta`` -- the smallest valuation of a maximal minor of ``M_{d,i}``
  restricted to the columns of the leading monomials of ``<f_1..f_i>`` in
  degree d;
* ``box`` -- ``2*delta + max_{k,|b|=d} (a_k - b).w``, a precision on the
  inputs that is enough for that step.

The maxima of ``box`` and ``delta`` over all steps are the sufficient input
precision and the guaranteed loss of the whole run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from gmpy2 import mpq

from .errors import PrecisionError
from .mf5 import tropical_mf5
from .poly import HomogeneousPoly, TropicalOrder, monomials_of_degree
from .scalars import INF, CappedScalar, rational_valuation


class GuardExceeded(ValueError):
    pass


def lt_precision_bound(f: HomogeneousPoly, order: TropicalOrder) -> int:
    """Coefficient precision needed to pin down LT(f): val(a) + max_b (a - b).w."""
    lt = f.leading_term(order)
    wa = order.wdot(lt.monomial)
    spread = max(wa - order.wdot(b) for b in monomials_of_degree(f.n, f.degree))
    return lt.coeff.valuation() + spread


def weight_spread(lms, d: int, order: TropicalOrder) -> int:
    """max over k and |b| = d of (a_k - b).w."""
    if not lms:
        return 0
    n = order.n
    wmin = min(order.wdot(b) for b in monomials_of_degree(n, d))
    return max(order.wdot(a) for a in lms) - wmin


def determinant(rows) -> mpq:
    a = [[mpq(x) for x in r] for r in rows]
    k = len(a)
    det = mpq(1)
    for c in range(k):
        piv = next((r for r in range(c, k) if a[r][c] != 0), None)
        if piv is None:
            return mpq(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, k):
            if a[r][c] != 0:
                q = a[r][c] / a[c][c]
                a[r] = [x - q * y for x, y in zip(a[r], a[c])]
    return det


def minor_valuation_oracle(M, columns, max_rows: int = 12):
    """Smallest valuation of a maximal minor of ``M`` on ``columns``.

    ``columns`` holds column indices or monomial labels. All row subsets
    (and column subsets, when there are more columns than rows) of the
    maximal size are enumerated. A square selection is a single minor and
    is computed regardless of the row guard.
    """
    pos = {m: j for j, m in enumerate(M.mon)}
    cols = [pos[c] if isinstance(c, tuple) else c for c in columns]
    nr = M.nrows
    k = min(nr, len(cols))
    if k == 0:
        return INF
    if nr > max_rows and not (nr == k == len(cols)):
        raise GuardExceeded(f"{nr} rows exceed the minor enumeration guard ({max_rows})")
    if comb(nr, k) * comb(len(cols), k) > 250_000:
        raise GuardExceeded("too many minors to enumerate")
    p = M.zero.prime
    vals = [[x.value for x in row] for row in M.rows]
    best = INF
    for rsub in combinations(range(nr), k):
        for csub in combinations(cols, k):
            det = determinant([[vals[r][c] for c in csub] for r in rsub])
            if det != 0:
                best = min(best, rational_valuation(det, p))
    return best


@dataclass
class LedgerEntry:
    degree: int
    step: int
    generator: int
    nrows: int
    leading_monomials: list
    delta: int
    box: int
    observed_loss: int
    method: str  # "minors" or "bounded-by-pivots-only"


@dataclass
class PrecisionLedger:
    entries: list = field(default_factory=list)

    @property
    def prec(self) -> int:
        return max((e.box for e in self.entries), default=0)

    @property
    def loss(self) -> int:
        return max((e.delta for e in self.entries), default=0)

    @property
    def observed_loss(self) -> int:
        return max((e.observed_loss for e in self.entries), default=0)

    def to_dict(self) -> dict:
        return {
            "prec_mf5trop": str(self.prec),
            "loss_mf5trop": str(self.loss),
            "steps": [
                {
                    "degree": str(e.degree),
                    "generator": str(e.generator),
                    "rows": str(e.nrows),
                    "delta": str(e.delta),
                    "box": str(e.box),
                    "observed_loss": str(e.observed_loss),
                    "method": e.method,
                }
                for e in self.entries
            ],
        }


def sufficient_precision(F, D: int, order: TropicalOrder, max_rows: int = 12) -> PrecisionLedger:
    """Per-step minor valuations and precision bounds (exact input assumed regular)."""
    report = tropical_mf5(F, D, order, carry="raw", keep_matrices=True)
    ledger = PrecisionLedger()
    for st in report.steps:
        if st.nrows == 0:
            continue
        try:
            delta = minor_valuation_oracle(st.matrix, st.leading_monomials, max_rows)
            method = "minors"
        except GuardExceeded:
            delta = st.loss
            method = "bounded-by-pivots-only"
        box = 2 * delta + weight_spread(st.leading_monomials, st.degree, order)
        ledger.entries.append(
            LedgerEntry(st.degree, st.step, st.generator, st.nrows,
                        st.leading_monomials, delta, box, st.loss, method)
        )
    return ledger


def truncate_poly(f: HomogeneousPoly, prec: int, dense: bool = True) -> HomogeneousPoly:
    """Capped approximation of an exact polynomial; ``dense`` also gives the
    absent monomials the coefficient O(p^prec)."""
    p = next(iter(f.terms.values())).prime
    mons = monomials_of_degree(f.n, f.degree) if dense else list(f.terms)
    terms = {}
    for m in mons:
        c = f.terms.get(m)
        terms[m] = CappedScalar.from_rational(0 if c is None else c.value, p, prec)
    return HomogeneousPoly(f.n, f.degree, terms)


def truncate_system(F, prec: int, dense: bool = True) -> list:
    return [truncate_poly(f, prec, dense) for f in F]


@dataclass
class StabilityVerdict:
    passed: bool
    verdict: str
    precision: int
    prec_mf5trop: int
    loss_mf5trop: int
    lm_match: bool | None = None
    min_output_precision: object = None
    diff: dict = field(default_factory=dict)
    error: str | None = None
    error_kind: str | None = None


def stability_check(F, prec: int, order: TropicalOrder, D: int,
                    ledger: PrecisionLedger | None = None) -> StabilityVerdict:
    """Run the capped driver on F truncated to ``prec`` and compare with exact."""
    ledger = ledger or sufficient_precision(F, D, order)
    expected_ok = prec > ledger.prec
    label = "pass" if expected_ok else "insufficient-precision-expected"
    exact = tropical_mf5(F, D, order, carry="raw")
    try:
        capped = tropical_mf5(truncate_system(F, prec), D, order, carry="raw")
    except PrecisionError as exc:
        return StabilityVerdict(False, "precision-exhausted" if expected_ok else label,
                                prec, ledger.prec, ledger.loss, error=str(exc),
                                error_kind=type(exc).__name__)
    a, b = exact.lm_sets(), capped.lm_sets()
    diff = {d: (sorted(a[d] - b[d]), sorted(b[d] - a[d])) for d in a if a[d] != b[d]}
    min_prec = capped.min_output_precision()
    ok = not diff and min_prec >= prec - ledger.loss
    if not ok and expected_ok:
        label = "fail"
    return StabilityVerdict(ok, label if ok or not expected_ok else "fail", prec,
                            ledger.prec, ledger.loss, not diff, min_prec, diff)
