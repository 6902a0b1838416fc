import random
from fractions import Fraction

import pytest

from tropmf5.errors import IncomparableAtPrecision
from tropmf5.macaulay import MacaulayMatrix, Signature, row_as_poly
from tropmf5.oracle import fraction_rank
from tropmf5.poly import HomogeneousPoly, TropicalOrder
from tropmf5.reduction import tropical_lup, tropical_row_echelon
from tropmf5.scalars import CappedScalar, ExactScalar


def matrix(values, mon, p=2, degree=None):
    rows = [[ExactScalar(Fraction(x), p) for x in r] for r in values]
    sigs = [Signature((0,) * len(mon[0]), i + 1) for i in range(len(rows))]
    return MacaulayMatrix(rows, mon, degree if degree is not None else sum(mon[0]),
                          ExactScalar(0, p), sigs)


def to_fractions(M):
    return [[Fraction(int(c.value.numerator), int(c.value.denominator)) for c in r] for r in M.rows]


XY = [(1, 0), (0, 1)]
W0 = TropicalOrder((0, 0), "grevlex")


def test_two_by_two_row_echelon():
    M = matrix([[2, 1], [1, 1]], XY)
    Mt, tr = tropical_row_echelon(M, W0)
    first = tr.pivots[0]
    assert (first.row, first.monomial, first.valuation) == (1, (1, 0), 0)
    assert set(tr.leading_monomials()) == {(1, 0), (0, 1)}
    assert tr.loss == 0
    assert tr.row_perm == [1, 0]


def test_diagonal_units_unchanged():
    M = matrix([[1, 0, 0], [0, 3, 0], [0, 0, 5]], [(2, 0), (1, 1), (0, 2)])
    Mt, tr = tropical_row_echelon(M, W0)
    assert tr.loss == 0
    assert sorted(to_fractions(Mt)) == sorted(to_fractions(M))


def test_single_column():
    M = matrix([[4], [2], [8]], [(1,)])
    Mt, tr = tropical_row_echelon(M, TropicalOrder((0,)))
    assert tr.rank == 1
    assert tr.pivots[0].row == 1 and tr.pivots[0].scalar.value == 2
    assert tr.loss == 1
    assert sorted(tr.zero_rows) == [0, 2]
    assert all(r[0].known_zero for r in Mt.rows[1:])


def test_lup_keeps_row_order():
    M = matrix([[2, 1], [1, 1]], XY)
    Mt, tr = tropical_lup(M, W0)
    assert [p.monomial for p in tr.pivots] == [(0, 1), (1, 0)]
    assert [p.row for p in tr.pivots] == [0, 1]
    assert Mt.signatures == M.signatures
    # same leading monomials as the row-echelon kernel, in a different pivot order
    _, tre = tropical_row_echelon(M, W0)
    assert set(tr.leading_monomials()) == set(tre.leading_monomials())
    assert tr.leading_monomials() != tre.leading_monomials()


def test_lup_on_reduced_input_is_identity():
    M = matrix([[1, 4, 2], [0, 1, 6], [0, 0, 1]], [(2, 0), (1, 1), (0, 2)])
    Mt, tr = tropical_lup(M, W0)
    assert tr.loss == 0
    assert to_fractions(Mt) == to_fractions(M)
    assert tr.operations == []


def random_matrix(rng, nr, nc, p):
    n = 3
    from tropmf5.poly import monomials_of_degree
    d = 1
    while len(monomials_of_degree(n, d)) < nc:
        d += 1
    order = TropicalOrder(tuple(rng.randint(-3, 3) for _ in range(n)), rng.choice(["grevlex", "lex"]))
    mon = order.enumerate_monomials(d)
    vals = [[rng.choice([0, 0, rng.randint(-9, 9) * Fraction(p) ** rng.randint(-1, 2)])
             for _ in mon] for _ in range(nr)]
    return matrix(vals, mon, p, d), order


def test_kernels_agree_on_leading_monomials():
    rng = random.Random(4)
    for _ in range(100):
        M, order = random_matrix(rng, rng.randint(1, 6), 6, rng.choice([2, 3, 5]))
        _, tr1 = tropical_row_echelon(M, order)
        _, tr2 = tropical_lup(M, order)
        assert sorted(tr1.leading_monomials()) == sorted(tr2.leading_monomials())
        assert tr1.rank == tr2.rank == fraction_rank(to_fractions(M))


def test_row_space_preserved():
    rng = random.Random(8)
    for _ in range(40):
        M, order = random_matrix(rng, rng.randint(1, 5), 6, 3)
        orig = to_fractions(M)
        for kernel in (tropical_row_echelon, tropical_lup):
            Mt, tr = kernel(M, order)
            red = to_fractions(Mt.relabeled(M.mon))
            r = fraction_rank(red)
            assert r == fraction_rank(orig)
            for row in orig:
                assert fraction_rank(red + [row]) == r


def test_every_row_space_element_has_a_pivot_leading_monomial():
    rng = random.Random(12)
    for _ in range(40):
        M, order = random_matrix(rng, rng.randint(1, 5), 6, 2)
        _, tr = tropical_row_echelon(M, order)
        lms = set(tr.leading_monomials())
        for _ in range(5):
            coeffs = [ExactScalar(Fraction(rng.randint(-5, 5)) * 2 ** rng.randint(-1, 2), 2)
                      for _ in M.rows]
            v = [ExactScalar(0, 2)] * M.ncols
            for c, row in zip(coeffs, M.rows):
                v = [a + c * b for a, b in zip(v, row)]
            f = row_as_poly(v, M.mon, M.degree)
            if not f.is_zero():
                assert f.leading_monomial(order) in lms


def test_reduced_rows_start_with_their_leading_term():
    rng = random.Random(13)
    for _ in range(40):
        M, order = random_matrix(rng, rng.randint(1, 5), 6, 5)
        Mt, tr = tropical_row_echelon(M, order)
        for k, p in enumerate(tr.pivots):
            f = Mt.row_as_poly(k)
            assert f.leading_monomial(order) == p.monomial == Mt.mon[k]
        Mt2, tr2 = tropical_lup(M, order)
        for p in tr2.pivots:
            assert Mt2.row_as_poly(p.row).leading_monomial(order) == p.monomial


def test_lup_only_adds_earlier_rows():
    rng = random.Random(14)
    for _ in range(40):
        M, order = random_matrix(rng, rng.randint(2, 6), 6, 3)
        _, tr = tropical_lup(M, order)
        assert all(src < dst for dst, src in tr.operations)


def capped_matrix(values, mon, p, prec):
    rows = [[CappedScalar.from_rational(x, p, prec) for x in r] for r in values]
    return MacaulayMatrix(rows, mon, sum(mon[0]), CappedScalar.structural_zero(p))


def test_capped_output_precision_bound():
    rng = random.Random(21)
    l = 25
    for _ in range(40):
        M, order = random_matrix(rng, rng.randint(1, 5), 6, 2)
        # clear the 1/2 denominators so every entry is a 2-adic integer
        vals = [[2 * c.value for c in r] for r in M.rows]
        C = capped_matrix(vals, M.mon, 2, l)
        for kernel in (tropical_row_echelon, tropical_lup):
            Ct, tr = kernel(C, order)
            for k, row in enumerate(Ct.rows):
                src = tr.row_perm[k]
                if all(pv.valuation >= 0 for pv in tr.pivots):
                    assert tr.row_loss[src] <= tr.loss
                for c in row:
                    if not c.known_zero:
                        assert c.precision >= l - tr.row_loss[src]


def test_unresolvable_pivot_raises():
    # O(2^2) x may hide a term greater than 1 * y when w = (0, 4)
    order = TropicalOrder((0, 4), "lex")
    M = MacaulayMatrix(
        [[CappedScalar.zero_at(2, 2), CappedScalar.from_rational(1, 2, 10)]],
        XY, 1, CappedScalar.structural_zero(2),
    )
    with pytest.raises(IncomparableAtPrecision) as info:
        tropical_row_echelon(M, order)
    assert info.value.location["pivot"] == 0
    with pytest.raises(IncomparableAtPrecision):
        tropical_lup(M, order)


def test_all_big_o_rows_are_presumed_zero():
    M = MacaulayMatrix(
        [[CappedScalar.zero_at(3, 4), CappedScalar.zero_at(3, 4)]],
        XY, 1, CappedScalar.structural_zero(3),
    )
    _, tr = tropical_row_echelon(M, W0)
    assert tr.presumed_zero_rows == [0] and tr.rank == 0
    _, tr = tropical_lup(M, W0)
    assert tr.presumed_zero_rows == [0]


def test_trace_export():
    M = matrix([[2, 1], [1, 1]], XY)
    _, tr = tropical_row_echelon(M, W0)
    d = tr.to_dict(["x", "y"])
    assert d["kernel"] == "row-echelon"
    assert [p["monomial"] for p in d["pivots"]] == ["x", "y"]
    assert d["loss"] == 0


def test_reduction_of_homogeneous_rows_keeps_degree():
    f = HomogeneousPoly(2, 2, {(2, 0): ExactScalar(1, 2), (0, 2): ExactScalar(4, 2)})
    from tropmf5.macaulay import build_full_macaulay
    M = build_full_macaulay([f], 3, W0)
    Mt, tr = tropical_row_echelon(M, W0)
    assert all(p.degree == 3 for p in Mt.polys() if not p.is_zero())
