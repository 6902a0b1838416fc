import json
import random
from fractions import Fraction

import pytest

from tropmf5.errors import IncomparableAtPrecision, NonHomogeneousError, PrecisionExhausted
from tropmf5.macaulay import build_full_macaulay
from tropmf5.mf5 import f5_row_filter, minimalize_lm, run_driver, tropical_mf5, tropical_mf5_sig
from tropmf5.oracle import full_macaulay_dgb, hilbert_regularity_check, monomial_in_ideal
from tropmf5.poly import HomogeneousPoly, TropicalOrder, monomials_of_degree
from tropmf5.report import report_to_json
from tropmf5.scalars import CappedScalar, ExactScalar

from systems import corpus, macaulay_bound, random_exact_poly, regular_square_system


def E(x, p=2):
    return ExactScalar(x, p)


def poly(n, terms, p=2):
    d = sum(next(iter(terms)))
    return HomogeneousPoly(n, d, {m: E(c, p) for m, c in terms.items()})


W0 = TropicalOrder((0, 0), "grevlex")


def lm_sets_up_to(report, D):
    return {d: report.lm_sets()[d] for d in range(D + 1)}


class TestRowFilter:
    def test_first_generator_keeps_everything(self):
        assert f5_row_filter(1, 3, 1, [], W0) == list(reversed(W0.enumerate_monomials(2)))

    def test_everything_excluded(self):
        assert f5_row_filter(2, 4, 2, monomials_of_degree(2, 2), W0) == []

    def test_x_squared_excluded(self):
        assert set(f5_row_filter(2, 4, 2, {(2, 0)}, W0)) == {(1, 1), (0, 2)}

    def test_below_generator_degree(self):
        assert f5_row_filter(2, 1, 2, [], W0) == []


class TestMinimalize:
    def test_drops_multiples(self):
        assert minimalize_lm([(1, 0), (2, 0)]) == [(1, 0)]

    def test_empty(self):
        assert minimalize_lm([]) == []

    def test_antichain_unchanged(self):
        lms = [(2, 0), (1, 1), (0, 3)]
        assert minimalize_lm(lms) == lms


def test_monomial_generators():
    F = [poly(2, {(1, 0): 1}), poly(2, {(0, 1): 1})]
    for alg in ("naive", "sigbased"):
        r = run_driver(F, 2, W0, alg)
        assert sorted(r.lm_ideal) == [(0, 1), (1, 0)]
        assert r.lm_sets()[2] == frozenset(monomials_of_degree(2, 2))


def test_two_quadrics_match_oracle():
    F = [poly(2, {(2, 0): 1, (1, 1): 1}), poly(2, {(0, 2): 1})]
    oracle = full_macaulay_dgb(F, 3, W0).lm_sets()
    for alg in ("naive", "sigbased"):
        assert lm_sets_up_to(run_driver(F, 3, W0, alg), 3) == oracle


def regular_cases(seed, count, vals=(0, 2)):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice([2, 3])
        degrees = [rng.randint(1, 3) for _ in range(n)]
        p = rng.choice([2, 3, 5])
        order = TropicalOrder(tuple(rng.randint(-3, 3) for _ in range(n)), rng.choice(["grevlex", "lex"]))
        F = regular_square_system(rng, n, degrees, p, vals)
        D = macaulay_bound(degrees)
        if D > 6 or not hilbert_regularity_check(F, D):
            continue
        out.append((F, order, D))
    return out


def test_macaulay_bound_degree_is_covered():
    for F, order, D in regular_cases(31, 15):
        r = tropical_mf5(F, D, order)
        for m in monomials_of_degree(order.n, D):
            assert monomial_in_ideal(m, r.lm_ideal)


def test_drivers_agree_on_regular_systems():
    for F, order, D in regular_cases(32, 50):
        a = tropical_mf5(F, D, order)
        b = tropical_mf5_sig(F, D, order)
        assert a.lm_sets() == b.lm_sets()
        assert a.zero_row_count == b.zero_row_count == 0


def test_single_generator_drivers_coincide():
    rng = random.Random(33)
    for _ in range(20):
        n = rng.choice([2, 3])
        order = TropicalOrder(tuple(rng.randint(-3, 3) for _ in range(n)))
        f = random_exact_poly(rng, n, rng.randint(1, 3), 3)
        a = tropical_mf5([f], 5, order)
        b = tropical_mf5_sig([f], 5, order)
        assert a.lm_sets() == b.lm_sets()
        # same leading monomials in the same degrees; tails depend on the kernel
        assert sorted((g.degree, g.leading.monomial) for g in a.basis) == sorted(
            (g.degree, g.leading.monomial) for g in b.basis)


def test_new_row_count_bound():
    for F, order, D in regular_cases(34, 20):
        r = tropical_mf5_sig(F, D, order)
        gens = sorted(F, key=lambda f: f.degree)
        for st in r.steps:
            i, d = st.step, st.degree
            di = gens[i - 1].degree
            prev = full_macaulay_dgb(gens[: i - 1], d - di, order).lm_sets().get(d - di, frozenset()) if i > 1 else frozenset()
            outside = [m for m in monomials_of_degree(order.n, d - di) if m not in prev]
            assert len(st.added) <= len(outside)


def test_rows_added_match_independent_filter():
    # rows of step (d, i) are x^a f_i for x^a outside LM(I_{i-1}) in degree d - d_i
    for F, order, D, _ in corpus(35, 40):
        r = tropical_mf5(F, D, order)
        gens = sorted(F, key=lambda f: f.degree)
        for st in r.steps:
            i, d = st.step, st.degree
            di = gens[i - 1].degree
            if i == 1:
                prev = frozenset()
            else:
                prev = full_macaulay_dgb(gens[: i - 1], d - di, order).lm_sets()[d - di]
            expected = {m for m in monomials_of_degree(order.n, d - di) if m not in prev}
            assert set(st.added) == expected


def test_no_zero_rows_on_regular_input():
    for F, order, D in regular_cases(36, 30):
        for alg in ("naive", "sigbased"):
            r = run_driver(F, D, order, alg)
            assert r.zero_row_count == 0
            assert all(s.discarded_zero_rows == 0 for s in r.steps)


def to_fraction(c):
    return Fraction(int(c.value.numerator), int(c.value.denominator))


def left_kernel(rows):
    """A nonzero vector c with c * rows = 0, or None."""
    nr = len(rows)
    aug = [[to_fraction(x) for x in r] + [Fraction(int(k == j)) for k in range(nr)] for j, r in enumerate(rows)]
    nc = len(rows[0])
    rank = 0
    for c in range(nc):
        piv = next((r for r in range(rank, nr) if aug[r][c] != 0), None)
        if piv is None:
            continue
        aug[rank], aug[piv] = aug[piv], aug[rank]
        for r in range(nr):
            if r != rank and aug[r][c] != 0:
                q = aug[r][c] / aug[rank][c]
                aug[r] = [a - q * b for a, b in zip(aug[r], aug[rank])]
        rank += 1
    return aug[rank][nc:] if rank < nr else None


def test_zero_row_on_non_regular_input_comes_from_a_non_principal_syzygy():
    n = 3
    order = TropicalOrder((0, 0, 0))
    F = [poly(n, {(1, 1, 0): 1}), poly(n, {(1, 0, 1): 1}), poly(n, {(0, 1, 1): 1})]
    assert not hilbert_regularity_check(F, 4)
    r = tropical_mf5(F, 4, order, carry="raw", keep_matrices=True)
    st = next(s for s in r.steps if s.zero_rows)
    M = st.matrix
    c = left_kernel(M.rows)
    assert c is not None
    comp = {pv.multiplier: x for pv, x in zip(M.provenance, c) if pv.index == st.step and x != 0}
    assert comp
    g = HomogeneousPoly(n, st.degree - F[st.step - 1].degree, {m: E(x) for m, x in comp.items()})
    lm = g.leading_monomial(order)
    prev = full_macaulay_dgb(F[: st.step - 1], g.degree, order).lm_sets()[g.degree]
    assert lm not in prev


def test_signature_repair_on_weighted_regular_system():
    order = TropicalOrder((0, 1, 3), "lex")
    f1 = HomogeneousPoly(3, 2, {(2, 0, 0): E(-8), (1, 1, 0): E(2)})
    f2 = HomogeneousPoly(3, 2, {(2, 0, 0): E(3), (1, 1, 0): E(-4), (0, 1, 1): E(-4)})
    F = [f1, f2]
    oracle = full_macaulay_dgb(F, 5, order).lm_sets()
    raw = tropical_mf5_sig(F, 5, order, repair=False)
    assert raw.zero_row_count > 0
    fixed = tropical_mf5_sig(F, 5, order)
    assert fixed.zero_row_count == 0
    assert fixed.repairs
    assert lm_sets_up_to(fixed, 5) == oracle
    assert lm_sets_up_to(tropical_mf5(F, 5, order), 5) == oracle


def test_carry_and_pivot_pool_variants_agree():
    for F, order, D, _ in corpus(37, 40):
        ref = tropical_mf5(F, D, order).lm_sets()
        assert tropical_mf5(F, D, order, carry="raw").lm_sets() == ref
        assert tropical_mf5(F, D, order, pivot_pool="full-macaulay").lm_sets() == ref


def test_reports_are_deterministic():
    for F, order, D, _ in corpus(38, 10):
        names = [f"x{k}" for k in range(order.n)]
        for alg in ("naive", "sigbased"):
            a = report_to_json(run_driver(F, D, order, alg), names)
            b = report_to_json(run_driver(F, D, order, alg), names)
            assert a == b
            json.loads(a)


def test_original_generator_indices_preserved():
    f = poly(2, {(2, 0): 1, (0, 2): 1})
    g = poly(2, {(1, 0): 1, (0, 1): 3})
    r = tropical_mf5([f, g], 3, W0)
    assert r.generator_order == [2, 1]
    assert r.steps[0].generator == 2
    assert {s.generator for s in r.steps} == {1, 2}


def test_basis_leading_terms_are_consistent():
    for F, order, D, _ in corpus(39, 30):
        r = tropical_mf5(F, D, order)
        lms = [g.leading.monomial for g in r.basis]
        assert len(lms) == len(set(lms))
        for g in r.basis:
            assert g.poly.leading_term(order).monomial == g.leading.monomial
        for a in r.lm_ideal:
            assert not any(b != a and all(x <= y for x, y in zip(b, a)) for b in r.lm_ideal)


def test_every_ideal_element_has_a_divisible_leading_term():
    rng = random.Random(40)
    for F, order, D, p in corpus(40, 15):
        r = tropical_mf5(F, D, order)
        for d in range(D + 1):
            gens = [f for f in F if f.degree <= d]
            if not gens:
                continue
            M = build_full_macaulay(gens, d, order)
            for _ in range(3):
                v = [ExactScalar(0, p)] * M.ncols
                for row in M.rows:
                    c = ExactScalar(rng.randint(-3, 3), p)
                    v = [a + c * b for a, b in zip(v, row)]
                f = HomogeneousPoly(order.n, d, dict(zip(M.mon, v)))
                if not f.is_zero():
                    assert monomial_in_ideal(f.leading_monomial(order), r.lm_ideal)


def test_capped_run_reports_exhausted_precision_location():
    # x + y and x + y + O(2^3) x: the second row cancels to O(2^3)
    f = HomogeneousPoly(2, 1, {(1, 0): CappedScalar.from_rational(1, 2, 3),
                              (0, 1): CappedScalar.from_rational(1, 2, 3)})
    g = HomogeneousPoly(2, 1, {(1, 0): CappedScalar.from_rational(9, 2, 3),
                              (0, 1): CappedScalar.from_rational(1, 2, 3)})
    with pytest.raises(PrecisionExhausted) as info:
        tropical_mf5([f, g], 1, W0)
    assert info.value.location == {"degree": 1, "generator": 2}


def test_capped_run_reports_incomparable_leading_term():
    order = TropicalOrder((0, 4), "lex")
    f = HomogeneousPoly(2, 1, {(1, 0): CappedScalar.zero_at(2, 2),
                              (0, 1): CappedScalar.from_rational(1, 2, 10)})
    for alg in ("naive", "sigbased"):
        with pytest.raises(IncomparableAtPrecision) as info:
            run_driver([f], 1, order, alg)
        assert info.value.location["degree"] == 1


def test_rejects_non_homogeneous_input():
    with pytest.raises(NonHomogeneousError):
        tropical_mf5([{(1, 0): E(1)}], 2, W0)


def test_rejects_empty_system_and_weight_mismatch():
    with pytest.raises(ValueError):
        tropical_mf5([], 2, W0)
    with pytest.raises(ValueError):
        tropical_mf5([poly(3, {(1, 0, 0): 1})], 2, W0)
