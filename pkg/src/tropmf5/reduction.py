"""Tropical row-echelon and signature-preserving tropical LUP reduction.

Both kernels pick as pivot the *greatest term* ``M[i][j] * x^mon[j]``: the
smallest ``val(M[i][j]) + w.mon[j]``, then the greater column monomial
under the tiebreak order, then (row-echelon only) the smallest current row
position. Eliminated entries are overwritten by the backend's known zero.

Over the capped backend every pivot decision is validated against the
entries that are only known as ``O(p^m)``: such an entry may hide a greater
term unless ``m + w.mon[j]`` is strictly larger than the pivot value.
Otherwise :class:`~tropmf5.errors.IncomparableAtPrecision` is raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .errors import IncomparableAtPrecision
from .macaulay import MacaulayMatrix
from .poly import Monomial, TropicalOrder


class Pivot(NamedTuple):
    row: int  # index of the row in the input matrix
    column: int  # index of the column in the input labels
    monomial: Monomial
    scalar: object
    valuation: int


@dataclass
class ReductionTrace:
    kernel: str
    pivots: list = field(default_factory=list)
    row_perm: list = field(default_factory=list)  # output row k = input row row_perm[k]
    col_perm: list = field(default_factory=list)  # output col k = input col col_perm[k]
    zero_rows: list = field(default_factory=list)  # input indices reduced to known zero
    presumed_zero_rows: list = field(default_factory=list)  # capped: all O(p^m)
    row_loss: list = field(default_factory=list)  # summed valuations of the pivots on each row's path
    row_path: list = field(default_factory=list)  # pivot numbers used on each row's path
    operations: list = field(default_factory=list)  # (target, source) input row indices

    @property
    def loss(self) -> int:
        return sum(p.valuation for p in self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def max_pivot_valuation(self) -> int:
        return max((p.valuation for p in self.pivots), default=0)

    def leading_monomials(self) -> list:
        return [p.monomial for p in self.pivots]

    def pivot_of_row(self) -> dict:
        return {p.row: p for p in self.pivots}

    def to_dict(self, names=None) -> dict:
        from .poly import format_monomial

        return {
            "kernel": self.kernel,
            "pivots": [
                {
                    "row": p.row,
                    "monomial": format_monomial(p.monomial, names),
                    "scalar": str(p.scalar),
                    "valuation": p.valuation,
                }
                for p in self.pivots
            ],
            "loss": self.loss,
            "row_permutation": self.row_perm,
            "column_permutation": self.col_perm,
            "zero_rows": self.zero_rows,
            "presumed_zero_rows": self.presumed_zero_rows,
        }


def _column_data(M: MacaulayMatrix, order: TropicalOrder):
    wdot = [order.wdot(m) for m in M.mon]
    # position of each label in the pure tiebreak order; 0 = greatest
    by_tb = sorted(range(M.ncols), key=lambda j: order.tiebreak_key(M.mon[j]), reverse=True)
    tbrank = [0] * M.ncols
    for r, j in enumerate(by_tb):
        tbrank[j] = r
    return wdot, tbrank


def _eliminate(rows, target, source, pc, cols, pivot, path, k):
    """rows[target] -= (rows[target][pc] / pivot) * rows[source] on ``cols``."""
    src = rows[source]
    dst = rows[target]
    q = dst[pc] / pivot
    for c in cols:
        x = src[c]
        if not x.known_zero:
            dst[c] = dst[c] - q * x
    dst[pc] = pivot.zero()
    path[target] |= path[source] | {k}


def _finish_paths(trace, path):
    trace.row_path = [sorted(s) for s in path]
    trace.row_loss = [sum(trace.pivots[k].valuation for k in s) for s in path]


def tropical_row_echelon(M: MacaulayMatrix, order: TropicalOrder, max_pivots=None):
    """Tropical row-echelon form of ``M`` (greatest term over the whole submatrix).

    Returns ``(Mt, trace)``. ``Mt`` has the pivot rows first, in pivot
    order, then the rows that reduced to zero; its columns are permuted so
    that the k-th pivot sits at position ``(k, k)``. ``max_pivots`` stops the
    elimination once that many pivots have been found.
    """
    rows = [list(r) for r in M.rows]
    nr, nc = len(rows), M.ncols
    wdot, tbrank = _column_data(M, order)
    rperm = list(range(nr))
    cperm = list(range(nc))
    trace = ReductionTrace("row-echelon")
    path = [set() for _ in range(nr)]
    limit = min(nr, nc) if max_pivots is None else min(nr, nc, max_pivots)

    k = 0
    while k < limit:
        best = None  # (value, tbrank, row position, col position)
        lower = None  # smallest value lower bound among O(p^m) entries
        for i in range(k, nr):
            row = rows[rperm[i]]
            for jj in range(k, nc):
                c = cperm[jj]
                e = row[c]
                if e.known_zero:
                    continue
                v = e.valuation() + wdot[c]
                if not e.distinguishable:
                    if lower is None or v < lower:
                        lower = v
                    continue
                key = (v, tbrank[c], i, jj)
                if best is None or key < best:
                    best = key
        if best is None:
            if lower is not None:
                trace.presumed_zero_rows = [rperm[i] for i in range(k, nr)]
            break
        if lower is not None and lower <= best[0]:
            raise IncomparableAtPrecision(
                f"pivot {k}: an entry known only as O(p^m) may exceed the term of value {best[0]}",
                location={"pivot": k, "row": rperm[best[2]], "column": M.mon[cperm[best[3]]]},
            )
        _, _, i, jj = best
        cperm[k], cperm[jj] = cperm[jj], cperm[k]
        rperm[k], rperm[i] = rperm[i], rperm[k]
        P, pc = rperm[k], cperm[k]
        pivot = rows[P][pc]
        pval = pivot.valuation()
        trace.pivots.append(Pivot(P, pc, M.mon[pc], pivot, pval))
        rest = [cperm[j] for j in range(k + 1, nc)]
        for i2 in range(k + 1, nr):
            R = rperm[i2]
            if not rows[R][pc].known_zero:
                _eliminate(rows, R, P, pc, rest, pivot, path, k)
                trace.operations.append((R, P))
        k += 1

    rank = len(trace.pivots)
    _finish_paths(trace, path)
    trace.row_perm = rperm
    trace.col_perm = cperm
    trace.zero_rows = [
        rperm[i] for i in range(rank, nr)
        if all(x.known_zero for x in rows[rperm[i]])
    ]
    out = MacaulayMatrix(
        [[rows[r][c] for c in cperm] for r in rperm],
        [M.mon[c] for c in cperm],
        M.degree,
        M.zero,
        None if M.signatures is None else [M.signatures[r] for r in rperm],
        [M.provenance[r] for r in rperm],
    )
    return out, trace


def tropical_lup(M: MacaulayMatrix, order: TropicalOrder):
    """Signature-preserving reduction: rows keep their order, and a row is only
    ever modified by adding multiples of rows above it.

    Row ``i`` pivots on its own greatest term among the not-yet-pivoted
    columns, then that column is cleared in every later row. Returns
    ``(Mt, trace)``; ``Mt`` keeps the input row order (zero rows in place)
    with pivot columns moved to the front in pivot order.
    """
    rows = [list(r) for r in M.rows]
    nr, nc = len(rows), M.ncols
    wdot, tbrank = _column_data(M, order)
    cperm = list(range(nc))
    trace = ReductionTrace("lup")
    path = [set() for _ in range(nr)]

    k = 0
    for i in range(nr):
        row = rows[i]
        best = None
        lower = None
        for jj in range(k, nc):
            c = cperm[jj]
            e = row[c]
            if e.known_zero:
                continue
            v = e.valuation() + wdot[c]
            if not e.distinguishable:
                if lower is None or v < lower:
                    lower = v
                continue
            key = (v, tbrank[c], jj)
            if best is None or key < best:
                best = key
        if best is None:
            if lower is not None:
                trace.presumed_zero_rows.append(i)
            else:
                trace.zero_rows.append(i)
            continue
        if lower is not None and lower <= best[0]:
            raise IncomparableAtPrecision(
                f"row {i}: an entry known only as O(p^m) may exceed the term of value {best[0]}",
                location={"row": i, "column": M.mon[cperm[best[2]]]},
            )
        jj = best[2]
        cperm[k], cperm[jj] = cperm[jj], cperm[k]
        pc = cperm[k]
        pivot = row[pc]
        pval = pivot.valuation()
        trace.pivots.append(Pivot(i, pc, M.mon[pc], pivot, pval))
        rest = [cperm[j] for j in range(k + 1, nc)]
        for i2 in range(i + 1, nr):
            if not rows[i2][pc].known_zero:
                _eliminate(rows, i2, i, pc, rest, pivot, path, k)
                trace.operations.append((i2, i))
        k += 1

    _finish_paths(trace, path)
    trace.row_perm = list(range(nr))
    trace.col_perm = cperm
    out = MacaulayMatrix(
        [[r[c] for c in cperm] for r in rows],
        [M.mon[c] for c in cperm],
        M.degree,
        M.zero,
        None if M.signatures is None else list(M.signatures),
        list(M.provenance),
    )
    return out, trace


def reduced_leading_terms(Mt: MacaulayMatrix, trace: ReductionTrace) -> dict:
    """Map output row index -> (pivot column monomial, pivot scalar)."""
    pos = {r: k for k, r in enumerate(trace.row_perm)}
    return {pos[p.row]: (p.monomial, p.scalar) for p in trace.pivots}
