import random

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from oracles import det_leibniz, int_matmul
from strategies import F101, y_laurent, y_polys

from milnor import (
    QQ,
    Integers,
    LaurentPoly,
    LaurentPolynomialsY,
    PolynomialsY,
    Transvection,
    TransvectionSeq,
    diagonalize,
    div_rem,
    lift,
    parse_poly,
    reduce_mod_x,
    reduce_to_zero_row,
    replay,
    smith,
    verify_certificate,
)
from milnor.errors import DivisionByZero, NotInDomain, ShapeError
from milnor.euclid import COLUMN, ROW, SmithCertificate, column_swap, row_swap
from milnor.generate import random_smith

P = parse_poly
ZZ = Integers()
KY = PolynomialsY(QQ)
KYL = LaurentPolynomialsY(QQ)


def is_diagonal(M):
    return all(not M[i][j] for i in range(len(M)) for j in range(len(M)) if i != j)


def ident(n, one=1, zero=0):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


class TestDivRem:
    def test_ky(self):
        assert div_rem(P("y^2 + 1"), P("y")) == (P("y"), P("1"))

    def test_zz(self):
        assert div_rem(7, 3) == (2, 1)
        q, r = div_rem(-7, 3)
        assert -7 == 3 * q + r and abs(r) < 3

    def test_laurent_y(self):
        q, r = div_rem(P("y^-1 + y"), P("y^-1"))
        assert (q, r) == (P("1 + y^2"), 0)
        assert q * P("y^-1") + r == P("y^-1 + y")

    def test_zero_divisor(self):
        for dom, a in ((ZZ, 3), (KY, P("y")), (KYL, P("y"))):
            with pytest.raises(DivisionByZero):
                dom.div_rem(a, dom.zero)

    def test_x_is_not_euclidean(self):
        with pytest.raises(NotInDomain):
            div_rem(P("x"), P("y"))
        with pytest.raises(NotInDomain):
            KY.div_rem(P("y^-1"), P("y"))

    def test_units(self):
        assert ZZ.is_unit(-1) and not ZZ.is_unit(2)
        assert KY.is_unit(P("3")) and not KY.is_unit(P("y"))
        assert KYL.is_unit(P("3*y^-4")) and not KYL.is_unit(P("1 + y"))

    @given(st.integers(-10**6, 10**6), st.integers(-1000, 1000))
    def test_zz_property(self, a, b):
        assume(b)
        q, r = ZZ.div_rem(a, b)
        assert a == q * b + r and (r == 0 or ZZ.delta(r) < ZZ.delta(b))

    @given(y_polys(), y_polys())
    def test_ky_property(self, a, b):
        assume(b)
        q, r = KY.div_rem(a, b)
        assert a == q * b + r
        assert not r or KY.delta(r) < KY.delta(b)
        assert KY.contains(q) and KY.contains(r)

    @given(y_polys(F101), y_polys(F101))
    def test_ky_property_fp(self, a, b):
        assume(b)
        dom = PolynomialsY(F101)
        q, r = dom.div_rem(a, b)
        assert a == q * b + r and (not r or dom.delta(r) < dom.delta(b))

    @given(y_laurent(), y_laurent())
    def test_kyl_property(self, a, b):
        assume(b)
        q, r = KYL.div_rem(a, b)
        assert a == q * b + r
        assert not r or KYL.delta(r) < KYL.delta(b)


class TestReplay:
    def test_empty(self):
        M = [[1, 2], [3, 4]]
        assert replay(TransvectionSeq(2), M) == M

    def test_single_row_transvection(self):
        lam = P("y^2 + 1")
        one, zero = LaurentPoly.one(), LaurentPoly.zero()
        out = replay(TransvectionSeq(3, (Transvection(ROW, 0, 2, lam),)), ident(3, one, zero))
        expected = ident(3, one, zero)
        expected[0][2] = lam
        assert out == expected

    def test_row_and_column_semantics(self):
        M = [[1, 2], [3, 4]]
        # left multiplication by I + 5 e_01
        assert replay(TransvectionSeq(2, (Transvection(ROW, 0, 1, 5),)), M) == int_matmul([[1, 5], [0, 1]], M)
        # right multiplication by I + 5 e_01
        assert replay(TransvectionSeq(2, (Transvection(COLUMN, 0, 1, 5),)), M) == int_matmul(M, [[1, 5], [0, 1]])

    def test_swaps_are_signed(self):
        M = [[1, 2], [3, 4]]
        assert replay(TransvectionSeq(2, tuple(row_swap(0, 1, 1))), M) == [[3, 4], [-1, -2]]
        assert replay(TransvectionSeq(2, tuple(column_swap(0, 1, 1))), M) == [[2, -1], [4, -3]]

    def test_out_of_range(self):
        with pytest.raises(ShapeError):
            replay(TransvectionSeq(2, (Transvection(ROW, 0, 2, 1),)), ident(2))
        with pytest.raises(ShapeError):
            Transvection(ROW, 1, 1, 1)

    def test_inverse_undoes(self):
        rng = random.Random(3)
        steps = tuple(
            Transvection(rng.choice([ROW, COLUMN]), *rng.sample(range(4), 2), rng.randint(-5, 5)) for _ in range(20)
        )
        seq = TransvectionSeq(4, steps)
        M = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
        assert replay(seq.inverse(), replay(seq, M)) == M

    @given(st.integers(2, 5), st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(-9, 9)), max_size=30))
    def test_det_one(self, n, raw):
        steps = tuple(Transvection(ROW, i % n, j % n, lam) for i, j, lam in raw if i % n != j % n)
        assert det_leibniz(replay(TransvectionSeq(n, steps), ident(n))) == 1


class TestLift:
    def test_inclusion(self):
        t = Transvection(ROW, 0, 1, P("y^2 + 1"))
        lifted = lift(TransvectionSeq(2, (t,)))
        assert lifted.steps == (t,)

    def test_empty(self):
        assert lift(TransvectionSeq(3)) == TransvectionSeq(3)

    def test_rejects_non_ky(self):
        with pytest.raises(NotInDomain):
            lift(TransvectionSeq(2, (Transvection(ROW, 0, 1, P("y^-1")),)))

    @given(
        st.integers(2, 4),
        st.lists(st.tuples(st.booleans(), st.integers(0, 3), st.integers(0, 3), y_polys(max_terms=2)), max_size=8),
    )
    def test_homomorphism(self, n, raw):
        steps = tuple(
            Transvection(ROW if r else COLUMN, i % n, j % n, lam) for r, i, j, lam in raw if i % n != j % n
        )
        seq = TransvectionSeq(n, steps)
        one, zero = LaurentPoly.one(), LaurentPoly.zero()
        lifted = replay(lift(seq), ident(n, one, zero))
        reduced = [[reduce_mod_x(e) for e in row] for row in lifted]
        assert reduced == replay(seq, ident(n, one, zero))


class TestDiagonalize:
    def test_already_diagonal(self):
        D = [[P("y"), 0 * P("1")], [0 * P("1"), P("y^2 + 1")]]
        U, V, out = diagonalize(D)
        assert len(U) == 0 and len(V) == 0 and out == D

    def test_zz_diagonal(self):
        U, V, out = diagonalize([[3, 0, 0], [0, -2, 0], [0, 0, 0]])
        assert (len(U), len(V)) == (0, 0)

    def test_swap_example(self):
        one, zero = P("1"), P("0")
        U, V, D = diagonalize([[zero, one], [zero, zero]])
        assert len(U) == 0 and len(V) == 3
        assert all(t.side is COLUMN for t in V)
        assert D[0][0] in (one, -one) and D[0][1] == D[1][0] == D[1][1] == zero

    def test_non_square(self):
        with pytest.raises(ShapeError):
            diagonalize([[1, 2, 3], [4, 5, 6]])

    def test_zz_4x4_abs_det(self):
        rng = random.Random(2024)
        for _ in range(30):
            Y = [[rng.randint(-20, 20) for _ in range(4)] for _ in range(4)]
            U, V, D = diagonalize(Y)
            dD = D[0][0] * D[1][1] * D[2][2] * D[3][3]
            assert abs(dD) == abs(det_leibniz(Y))
            assert dD == det_leibniz(Y)

    @given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-50, 50), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_soundness_zz(self, Y):
        U, V, D = diagonalize(Y)
        assert replay(V, replay(U, Y)) == D
        assert is_diagonal(D)
        n = len(Y)
        assert all(t.i != t.j for t in list(U) + list(V))
        assert all(t.side is ROW for t in U) and all(t.side is COLUMN for t in V)
        if n <= 4:
            assert det_leibniz(replay(U, ident(n))) == 1
            assert det_leibniz(replay(V, ident(n))) == 1
            prod = 1
            for i in range(n):
                prod *= D[i][i]
            assert prod == det_leibniz(Y)

    @given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(y_polys(degree=3, max_terms=3), min_size=n, max_size=n), min_size=n, max_size=n)))
    def test_soundness_ky(self, Y):
        one, zero = LaurentPoly.one(), LaurentPoly.zero()
        U, V, D = diagonalize(Y, KY)
        assert replay(V, replay(U, Y)) == D
        assert is_diagonal(D)
        n = len(Y)
        assert det_leibniz(replay(U, ident(n, one, zero)), zero) == one
        assert det_leibniz(replay(V, ident(n, one, zero)), zero) == one
        prod = one
        for i in range(n):
            prod = prod * D[i][i]
        assert prod == det_leibniz(Y, zero)

    def test_soundness_kyl(self):
        Y = [[P("y^-1 + 1"), P("y^2")], [P("3"), P("y^-2 - y")]]
        U, V, D = diagonalize(Y, KYL)
        assert replay(V, replay(U, Y)) == D and is_diagonal(D)

    def test_seeded_suite(self):
        for seed in range(40):
            n = 1 + seed % 5
            for dom in ("zz", "ky"):
                Y = random_smith(n, seed, dom, degree=3 if dom == "ky" else 6)
                cert = smith(Y)
                assert verify_certificate(cert).ok


class TestReduceToZeroRow:
    def test_singular_finds_row(self):
        Y = [[P("y"), P("y^2")], [P("1"), P("y")]]
        U, k, M = reduce_to_zero_row(Y, KY)
        assert k is not None and not any(M[k])
        assert replay(U, Y) == M

    def test_nonsingular(self):
        U, k, M = reduce_to_zero_row([[2, 1], [1, 1]])
        assert k is None

    def test_zero_row_already(self):
        U, k, _ = reduce_to_zero_row([[1, 2], [0, 0]])
        assert k == 1 and len(U) == 0

    @given(st.integers(2, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n - 1, max_size=n - 1)))
    def test_dependent_rows(self, rows):
        n = len(rows[0])
        combo = [sum(r[j] * (i + 1) for i, r in enumerate(rows)) for j in range(n)]
        Y = rows + [combo]
        U, k, M = reduce_to_zero_row(Y)
        assert k is not None and not any(M[k]) and replay(U, Y) == M


class TestSmithCertificate:
    def test_verifies(self):
        cert = smith([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        report = verify_certificate(cert)
        assert report.ok
        assert {"replay", "det_u", "det_v", "det_preserved", "diagonal"} <= set(report.names())

    def test_tampered_diagonal(self):
        cert = smith([[2, 4], [3, 5]])
        D = [list(r) for r in cert.D]
        D[1][1] += 1
        report = verify_certificate(SmithCertificate(cert.Y, cert.U, cert.V, D, cert.domain))
        assert "replay" in report.failed() and "det_preserved" in report.failed()

    def test_non_diagonal_claim(self):
        cert = smith([[2, 4], [3, 5]])
        D = [list(r) for r in cert.D]
        D[0][1] = 1
        report = verify_certificate(SmithCertificate(cert.Y, cert.U, cert.V, D, cert.domain))
        assert "diagonal" in report.failed()
