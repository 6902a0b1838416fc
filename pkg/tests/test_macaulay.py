import random
from fractions import Fraction
from math import comb

from tropmf5.macaulay import (
    MacaulayMatrix,
    Signature,
    build_full_macaulay,
    check_provenance,
    macaulay_row_count,
    poly_as_row,
    row_as_poly,
    signature_compare,
)
from tropmf5.oracle import _fraction_macaulay, fraction_rank
from tropmf5.poly import HomogeneousPoly, TropicalOrder, monomials_of_degree
from tropmf5.reduction import tropical_row_echelon
from tropmf5.scalars import ExactScalar

from systems import random_exact_poly


def E(x, p=2):
    return ExactScalar(x, p)


W0 = TropicalOrder((0, 0), "grevlex")


def test_single_linear_generator_degree_two():
    f = HomogeneousPoly(2, 1, {(1, 0): E(1), (0, 1): E(1)})
    M = build_full_macaulay([f], 2, W0)
    assert (M.nrows, M.ncols) == (2, 3)
    assert [pv.multiplier for pv in M.provenance] == [(0, 1), (1, 0)]
    assert M.mon == [(2, 0), (1, 1), (0, 2)]
    assert [[c.value for c in r] for r in M.rows] == [[0, 1, 1], [1, 1, 0]]
    assert M.is_macaulay(W0)
    assert M.signatures_increasing(W0)
    assert check_provenance(M, [f])


def test_row_count_formula():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 4)
        degrees = [rng.randint(1, 3) for _ in range(rng.randint(1, 3))]
        d = rng.randint(max(degrees), 6)
        F = [random_exact_poly(rng, n, di, 3) for di in degrees]
        M = build_full_macaulay(F, d, TropicalOrder((0,) * n))
        assert M.nrows == macaulay_row_count(n, d, degrees)
        assert M.nrows == sum(comb(n + d - di - 1, n - 1) for di in degrees)
        assert M.ncols == comb(n + d - 1, n - 1)


def test_rows_lie_in_the_ideal():
    rng = random.Random(5)
    for _ in range(25):
        degrees = [rng.randint(1, 2), rng.randint(1, 2)]
        d = rng.randint(max(degrees), 4)
        order = TropicalOrder((rng.randint(-2, 2), rng.randint(-2, 2)), rng.choice(["grevlex", "lex"]))
        F = [random_exact_poly(rng, 2, di, 2) for di in degrees]
        M = build_full_macaulay(F, d, order)
        # reference span built independently, in the lex-descending basis
        ref = _fraction_macaulay(F, d, 2)
        mons = monomials_of_degree(2, d)
        base_rank = fraction_rank(ref)
        for row in M.rows:
            f = row_as_poly(row, M.mon, d)
            vec = [Fraction(int(f.terms[m].value.numerator), int(f.terms[m].value.denominator))
                   if m in f.terms else Fraction(0) for m in mons]
            assert fraction_rank(ref + [vec]) == base_rank
        assert fraction_rank([[Fraction(int(c.value.numerator), int(c.value.denominator)) for c in r]
                              for r in M.rows]) == base_rank


def test_poly_row_round_trip():
    rng = random.Random(9)
    for _ in range(100):
        n, d = rng.randint(1, 3), rng.randint(0, 3)
        order = TropicalOrder(tuple(rng.randint(-3, 3) for _ in range(n)))
        mon = order.enumerate_monomials(d)
        f = random_exact_poly(rng, n, d, 5)
        assert row_as_poly(poly_as_row(f, mon, E(0, 5)), mon, d) == f


def test_zero_row_is_zero_poly():
    mon = W0.enumerate_monomials(2)
    assert row_as_poly([E(0)] * 3, mon, 2).is_zero()


def test_read_off_row():
    f = HomogeneousPoly(2, 2, {(2, 0): E(1), (0, 2): E(2)})
    row = poly_as_row(f, [(2, 0), (1, 1), (0, 2)], E(0))
    assert [c.value for c in row] == [1, 0, 2]


def test_signature_index_dominates():
    assert signature_compare(Signature((0, 2), 1), Signature((1, 0), 2), W0) == -1


def test_signature_equal():
    assert signature_compare(Signature((1, 1), 3), Signature((1, 1), 3), W0) == 0


def test_signature_same_index_grevlex():
    assert signature_compare(Signature((1, 1), 3), Signature((2, 0), 3), W0) == -1


def test_columns_stay_a_permutation_after_reduction():
    rng = random.Random(1)
    for _ in range(20):
        n = rng.choice([2, 3])
        order = TropicalOrder(tuple(rng.randint(-3, 3) for _ in range(n)), rng.choice(["grevlex", "lex"]))
        F = [random_exact_poly(rng, n, rng.randint(1, 2), 3) for _ in range(2)]
        d = 3
        M = build_full_macaulay(F, d, order)
        Mt, _ = tropical_row_echelon(M, order)
        assert sorted(Mt.mon) == sorted(order.enumerate_monomials(d))
        assert len(set(Mt.mon)) == len(Mt.mon)


def test_dump_format():
    f = HomogeneousPoly(2, 1, {(1, 0): E(1), (0, 1): E(Fraction(1, 2))})
    M = build_full_macaulay([f], 1, W0)
    lines = M.dump(["x", "y"]).splitlines()
    assert lines[0] == "mon: x y"
    assert lines[1] == "sig=(1,1) | prov=1*f_1 | [1] [1/2]"


def test_relabel_and_subset():
    f = HomogeneousPoly(2, 1, {(1, 0): E(3), (0, 1): E(5)})
    M = build_full_macaulay([f], 2, W0)
    R = M.relabeled(list(reversed(M.mon)))
    assert [p for p in R.polys()] == [p for p in M.polys()]
    S = M.subset([1])
    assert S.nrows == 1 and S.signatures == [M.signatures[1]]
    assert isinstance(M.copy(), MacaulayMatrix)
