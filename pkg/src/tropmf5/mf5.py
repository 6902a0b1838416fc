"""Tropical Matrix-F5 drivers.

``tropical_mf5`` builds, for every degree d and generator step i, the
matrix ``M_{d,i}`` from the previous step plus the rows ``x^a f_i`` whose
multiplier is not a leading monomial of ``<f_1..f_{i-1}>`` in degree
``d - d_i`` (the F5 criterion), and reduces it with the tropical
row-echelon kernel.

``tropical_mf5_sig`` instead grows ``M_{d,i}`` from the reduced rows of
``M_{d-1,i}`` multiplied by single variables, keeps one row per signature,
and reduces with the signature-preserving LUP kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NonHomogeneousError, PrecisionExhausted, PrecisionError
from .macaulay import (
    MacaulayMatrix,
    Provenance,
    Signature,
    build_full_macaulay,
    multiple_row,
    multiply_row_by_variable,
    row_as_poly,
    signature_key,
    zero_of,
)
from .poly import HomogeneousPoly, Monomial, Term, TropicalOrder, divides, mmul, variable
from .reduction import ReductionTrace, tropical_lup, tropical_row_echelon


@dataclass
class GroebnerBasisElement:
    poly: HomogeneousPoly
    leading: Term
    degree: int
    generator: int  # original (1-based) index of the generator of the step
    step: tuple  # (d, i) with i the position in the degree-sorted sequence


@dataclass
class StepRecord:
    degree: int
    step: int  # position in the degree-sorted sequence
    generator: int  # original index
    nrows: int
    ncols: int
    added: list  # multipliers (or signature monomials) of the new rows
    rank: int
    zero_rows: int
    pivot_valuations: list
    loss: int
    leading_monomials: list
    trace: ReductionTrace | None = None
    matrix: MacaulayMatrix | None = None  # the matrix before reduction
    reduced: MacaulayMatrix | None = None
    repaired: bool = False  # signature driver: rows rebuilt as raw x^a f_i
    discarded_zero_rows: int = 0  # zero rows of the discarded first attempt


@dataclass
class GroebnerReport:
    basis: list
    lm_ideal: list
    lm_by_degree: dict
    steps: list
    order: TropicalOrder
    degree_bound: int
    algorithm: str
    carry: str = "reduced"
    pivot_pool: str = "f5"
    status: str = "exact"
    input_precision: int | None = None
    generator_order: list = field(default_factory=list)

    @property
    def total_loss(self) -> int:
        return sum(s.loss for s in self.steps)

    @property
    def max_step_loss(self) -> int:
        return max((s.loss for s in self.steps), default=0)

    @property
    def zero_row_count(self) -> int:
        return sum(s.zero_rows for s in self.steps)

    @property
    def repairs(self) -> list:
        return [(s.degree, s.generator) for s in self.steps if s.repaired]

    def lm_sets(self) -> dict:
        return {d: frozenset(v) for d, v in self.lm_by_degree.items()}

    def min_output_precision(self):
        """Smallest absolute precision over all basis coefficients."""
        return min(
            (c.precision for g in self.basis for c in g.poly.terms.values()),
            default=float("inf"),
        )


def minimalize_lm(lms) -> list:
    """Keep the divisibility-minimal monomials (first occurrence order)."""
    uniq = list(dict.fromkeys(tuple(m) for m in lms))
    return [
        m for m in uniq
        if not any(o != m and divides(o, m) for o in uniq)
    ]


def f5_row_filter(i: int, d: int, di: int, lm_prev, order: TropicalOrder) -> list:
    """Multipliers x^a of degree d - d_i kept by the F5 criterion, ascending."""
    if d < di:
        return []
    cands = list(reversed(order.enumerate_monomials(d - di)))
    if i == 1:
        return cands
    lm_prev = set(lm_prev)
    return [a for a in cands if a not in lm_prev]


def sort_generators(F):
    for f in F:
        if not isinstance(f, HomogeneousPoly):
            raise NonHomogeneousError("generators must be homogeneous polynomials")
    idx = sorted(range(len(F)), key=lambda k: F[k].degree)
    return [F[k] for k in idx], [k + 1 for k in idx]


def _empty(mon, d, zero, with_sigs=False):
    return MacaulayMatrix([], mon, d, zero, [] if with_sigs else None, [])


def _strip_zero(Mt: MacaulayMatrix, mon) -> MacaulayMatrix:
    keep = [k for k, r in enumerate(Mt.rows) if not all(x.known_zero for x in r)]
    return Mt.subset(keep).relabeled(mon)


def _sorted_lms(lms, order):
    return sorted(lms, key=order.monomial_key, reverse=True)


def _is_capped(zero) -> bool:
    return not zero.exact


class _Run:
    """Bookkeeping shared by both drivers."""

    def __init__(self, F, D, order, algorithm, keep):
        if not F:
            raise ValueError("at least one generator is required")
        self.gens, self.orig = sort_generators(F)
        for f in self.gens:
            if f.n != order.n:
                raise ValueError(f"weight has {order.n} entries, polynomials have {f.n} variables")
        self.zero = zero_of(self.gens)
        self.capped = _is_capped(self.zero)
        self.D = D
        self.order = order
        self.algorithm = algorithm
        self.keep = keep
        self.lm = {}
        self.seen = set()
        self.basis = []
        self.steps = []
        self.lm_by_degree = {}

    def lm_of(self, d, i) -> frozenset:
        if i == 0 or d < 0:
            return frozenset()
        return self.lm.get((d, i), frozenset())

    def record(self, d, i, M, Mt, trace, added, input_rows, repaired=False, discarded=0):
        if trace.presumed_zero_rows:
            raise PrecisionExhausted(
                f"{len(trace.presumed_zero_rows)} row(s) indistinguishable from zero",
                location={"degree": d, "generator": self.orig[i - 1]},
            )
        lms = trace.leading_monomials()
        self.lm[(d, i)] = frozenset(lms)
        pos = {r: k for k, r in enumerate(trace.row_perm)}
        for p in trace.pivots:
            if p.monomial in self.seen:
                continue
            self.seen.add(p.monomial)
            poly = row_as_poly(Mt.rows[pos[p.row]], Mt.mon, d)
            self.basis.append(
                GroebnerBasisElement(
                    poly, Term(p.scalar, p.monomial), d, self.orig[i - 1], (d, i)
                )
            )
        self.steps.append(
            StepRecord(
                degree=d,
                step=i,
                generator=self.orig[i - 1],
                nrows=M.nrows,
                ncols=M.ncols,
                added=added,
                rank=trace.rank,
                zero_rows=len([r for r in trace.zero_rows if r in input_rows]),
                pivot_valuations=[p.valuation for p in trace.pivots],
                loss=trace.loss,
                leading_monomials=_sorted_lms(lms, self.order),
                trace=trace if self.keep else None,
                matrix=M if self.keep else None,
                reduced=Mt if self.keep else None,
                repaired=repaired,
                discarded_zero_rows=discarded,
            )
        )

    def report(self, **kw) -> GroebnerReport:
        s = len(self.gens)
        for d in range(self.D + 1):
            self.lm_by_degree[d] = _sorted_lms(self.lm_of(d, s), self.order)
        prec = None
        if self.capped:
            prec = min(
                (c.precision for f in self.gens for c in f.terms.values()), default=None
            )
        return GroebnerReport(
            basis=self.basis,
            lm_ideal=minimalize_lm([g.leading.monomial for g in self.basis]),
            lm_by_degree=self.lm_by_degree,
            steps=self.steps,
            order=self.order,
            degree_bound=self.D,
            algorithm=self.algorithm,
            status="capped" if self.capped else "exact",
            input_precision=prec,
            generator_order=self.orig,
            **kw,
        )


def tropical_mf5(F, D: int, order: TropicalOrder, carry: str = "reduced",
                 pivot_pool: str = "f5", keep_matrices: bool = False) -> GroebnerReport:
    """Naive tropical Matrix-F5.

    ``carry='reduced'`` starts ``M_{d,i}`` from the reduced ``M~_{d,i-1}``;
    ``carry='raw'`` from the unreduced ``M_{d,i-1}`` (same image), so every
    reduction starts again from input-precision rows.
    ``pivot_pool='full-macaulay'`` reduces the whole ``Mac_d(f_1..f_i)`` and
    stops once the rank predicted by the F5 row count is reached.
    """
    if carry not in ("reduced", "raw"):
        raise ValueError(f"unknown carry mode {carry!r}")
    if pivot_pool not in ("f5", "full-macaulay"):
        raise ValueError(f"unknown pivot pool {pivot_pool!r}")
    run = _Run(F, D, order, "naive", keep_matrices)
    zero = run.zero
    for d in range(D + 1):
        mon = order.enumerate_monomials(d)
        cur_red = _empty(mon, d, zero)
        cur_raw = _empty(mon, d, zero)
        for i, f in enumerate(run.gens, start=1):
            if d < f.degree:
                if (d, i - 1) in run.lm:
                    run.lm[(d, i)] = run.lm[(d, i - 1)]
                continue
            added = f5_row_filter(i, d, f.degree, run.lm_of(d - f.degree, i - 1), order)
            new_rows = [multiple_row(f, a, mon, zero) for a in added]
            new_prov = [Provenance(i, a) for a in added]
            raw = MacaulayMatrix(cur_raw.rows + new_rows, mon, d, zero, None,
                                 cur_raw.provenance + new_prov)
            try:
                if pivot_pool == "full-macaulay":
                    M = build_full_macaulay(run.gens[:i], d, order, zero)
                    M.signatures = None
                    target = len(run.lm_of(d, i - 1)) + len(added)
                    Mt, trace = tropical_row_echelon(M, order, max_pivots=target)
                    if run.capped and trace.rank < target:
                        trace.presumed_zero_rows = trace.presumed_zero_rows or [None]
                    input_rows = set(range(M.nrows))
                else:
                    base = cur_red if carry == "reduced" else cur_raw
                    M = MacaulayMatrix(base.rows + new_rows, mon, d, zero, None,
                                       base.provenance + new_prov)
                    Mt, trace = tropical_row_echelon(M, order)
                    input_rows = set(range(M.nrows))
                run.record(d, i, M, Mt, trace, added, input_rows)
            except PrecisionError as exc:
                exc.location = {"degree": d, "generator": run.orig[i - 1], **(exc.location or {})}
                raise
            cur_raw = raw
            cur_red = _strip_zero(Mt, mon)
    return run.report(carry=carry, pivot_pool=pivot_pool)


def tropical_mf5_sig(F, D: int, order: TropicalOrder, keep_matrices: bool = False,
                     repair: bool = True) -> GroebnerReport:
    """Signature-based tropical Matrix-F5 with LUP reduction.

    When a freshly added row reduces to zero and ``repair`` is set, the new
    rows of that step are rebuilt as ``x^b f_i`` (same signatures) and the
    step is reduced again; the event is kept in ``StepRecord.repaired``.
    """
    run = _Run(F, D, order, "sigbased", keep_matrices)
    zero = run.zero
    n = order.n
    prev_deg = {}  # i -> reduced M~_{d-1,i}, canonical labels, nonzero rows
    for d in range(D + 1):
        mon = order.enumerate_monomials(d)
        pos = {m: j for j, m in enumerate(mon)}
        cur = _empty(mon, d, zero, with_sigs=True)
        this_deg = {}
        for i, f in enumerate(run.gens, start=1):
            if d < f.degree:
                if (d, i - 1) in run.lm:
                    run.lm[(d, i)] = run.lm[(d, i - 1)]
                this_deg[i] = cur
                continue
            forbidden = run.lm_of(d - f.degree, i - 1)
            new = {}  # signature monomial -> row
            if d == f.degree:
                one = (0,) * n
                if one not in forbidden:
                    new[one] = multiple_row(f, one, mon, zero)
            else:
                src = prev_deg.get(i)
                if src is not None:
                    for L, sig in zip(src.rows, src.signatures):
                        if sig.index != i:
                            continue
                        for x in range(n):
                            beta = mmul(sig.monomial, variable(n, x))
                            if beta in forbidden or beta in new:
                                continue
                            new[beta] = multiply_row_by_variable(L, src.mon, x, pos, zero)
            order_new = sorted(new, key=lambda b: signature_key(Signature(b, i), order))
            base = len(cur.rows)

            def assemble(rows):
                return MacaulayMatrix(
                    cur.rows + rows, mon, d, zero,
                    cur.signatures + [Signature(b, i) for b in order_new],
                    cur.provenance + [Provenance(i, b) for b in order_new],
                )

            try:
                M = assemble([new[b] for b in order_new])
                Mt, trace = tropical_lup(M, order)
                lost = [r for r in trace.zero_rows + trace.presumed_zero_rows if r >= base]
                discarded = 0
                if lost and repair:
                    # With valuations, rewriting x^g f_i for g in LM(I_{i-1}) can
                    # climb in the signature order, so the x*L rows may be
                    # dependent. The raw products x^b f_i span I_i cap A_d.
                    discarded = len(lost)
                    M = assemble([multiple_row(f, b, mon, zero) for b in order_new])
                    Mt, trace = tropical_lup(M, order)
                run.record(d, i, M, Mt, trace, order_new, set(range(M.nrows)),
                           repaired=bool(discarded), discarded=discarded)
            except PrecisionError as exc:
                exc.location = {"degree": d, "generator": run.orig[i - 1], **(exc.location or {})}
                raise
            cur = _strip_zero(Mt, mon)
            this_deg[i] = cur
        prev_deg = this_deg
    return run.report()


def run_driver(F, D, order, algorithm="naive", **kw) -> GroebnerReport:
    if algorithm == "naive":
        return tropical_mf5(F, D, order, **kw)
    if algorithm == "sigbased":
        kw.pop("carry", None)
        kw.pop("pivot_pool", None)
        return tropical_mf5_sig(F, D, order, **kw)
    raise ValueError(f"unknown algorithm {algorithm!r}")
