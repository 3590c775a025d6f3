"""Tests for the exact sparse linear algebra kernel.

The reference point throughout is ``dense_rref`` below, a direct textbook
Gauss-Jordan elimination over ``fractions.Fraction``.  It is written against
the dense list-of-lists representation and shares no code with the sparse
implementation under test.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from majorana.linalg import (
    EchelonBasis,
    LinearSystem,
    Q,
    SparseVector,
    echelonize,
    kernel_basis,
    qparse,
    qstr,
)


def dense_rref(mat):
    """Reduced row echelon form of a dense rational matrix.

    Plain Gauss-Jordan: scan columns left to right, swap up a row with a
    nonzero entry, scale it monic, clear the column everywhere else.

    Args:
        mat: list of rows, each a list of ``Fraction`` entries.

    Returns:
        ``(rows, pivots)`` where ``rows`` holds the nonzero rows of the RREF
        and ``pivots`` the pivot column of each row, in order.
    """
    m = [list(row) for row in mat]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m[:r], pivots


def frac_pair(x):
    return (int(x.numerator), int(x.denominator))


def to_dense_fracs(v):
    return [Fraction(*frac_pair(x)) for x in v.to_dense()]


def sparse_from_fracs(row):
    return SparseVector.from_dense([Q(x.numerator) / Q(x.denominator) for x in row])


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=8)


def matrices(nrows, ncols):
    return st.lists(
        st.lists(rationals, min_size=ncols, max_size=ncols),
        min_size=nrows,
        max_size=nrows,
    )


class TestScalars:
    def test_qparse_roundtrip(self):
        for s in ["0", "3", "-3", "13/256", "-13/256", "675/2048"]:
            assert qstr(qparse(s)) == s

    def test_exactness(self):
        x = Q(1) / Q(3)
        assert x * Q(3) == Q(1)
        assert qstr(Q(7) / Q(-8)) == "-7/8"


class TestSparseVector:
    def test_basic_ops(self):
        v = SparseVector(5)
        v[2] = Q(3)
        v[4] = Q(-1) / Q(2)
        assert v[0] == 0
        assert v.nnz == 2
        assert v.items() == [(2, Q(3)), (4, Q(-1, 2))]
        v[2] = Q(0)
        assert v.nnz == 1

    def test_add_scaled_cancels(self):
        v = SparseVector.from_dense([Q(1), Q(2), Q(0)])
        w = SparseVector.from_dense([Q(1), Q(0), Q(4)])
        v.add_scaled(w, Q(-1))
        assert v.to_dense() == [Q(0), Q(2), Q(-4)]
        assert 0 not in v.support()

    def test_arithmetic_operators(self):
        v = SparseVector.from_dense([Q(1), Q(-2)])
        w = SparseVector.from_dense([Q(3), Q(2)])
        assert (v + w).to_dense() == [Q(4), Q(0)]
        assert (v - w).to_dense() == [Q(-2), Q(-4)]
        assert (Q(2) * v).to_dense() == [Q(2), Q(-4)]
        assert (-v).to_dense() == [Q(-1), Q(2)]

    def test_dot(self):
        v = SparseVector.from_dense([Q(1), Q(2), Q(3)])
        w = SparseVector.from_dense([Q(4), Q(0), Q(-1)])
        assert v.dot(w) == Q(1)

    def test_leading(self):
        v = SparseVector(4)
        assert v.leading() is None
        v[3] = Q(5)
        v[1] = Q(2)
        assert v.leading() == (1, Q(2))

    def test_transport_signed(self):
        # images are 1-based and signed: coordinate j lands on |sp[j]|-1
        # with the sign applied to the value
        v = SparseVector.from_dense([Q(1), Q(2), Q(3)])
        sp = [2, -1, 3]
        w = v.transport(sp)
        assert w.to_dense() == [Q(-2), Q(1), Q(3)]

    def test_transport_composes(self):
        v = SparseVector.from_dense([Q(1), Q(2), Q(3)])
        sp1 = [3, -2, 1]
        sp2 = [-1, 3, 2]
        step = v.transport(sp1).transport(sp2)
        # compose by hand: j -> sp1 -> sp2
        comp = []
        for j in range(3):
            s1 = sp1[j]
            s2 = sp2[abs(s1) - 1]
            comp.append(s2 if s1 > 0 else -s2)
        assert step.to_dense() == v.transport(comp).to_dense()

    def test_resize(self):
        v = SparseVector.from_dense([Q(1), Q(0), Q(2)])
        w = v.resized(5)
        assert w.n == 5
        assert w.to_dense() == [Q(1), Q(0), Q(2), Q(0), Q(0)]


class TestEchelonize:
    def test_fixed_seed_matches_dense_oracle(self):
        # 6x9 rational matrix with a fixed seed; rank and the full reduced
        # rows must agree with the dense textbook elimination
        rng = random.Random(20260817)
        mat = [
            [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(9)]
            for _ in range(6)
        ]
        want_rows, want_pivots = dense_rref(mat)
        got_rows, got_pivots = echelonize([sparse_from_fracs(r) for r in mat], 9)
        assert list(got_pivots) == want_pivots
        assert [to_dense_fracs(r) for r in got_rows] == want_rows

    @given(matrices(5, 7))
    def test_matches_dense_oracle(self, mat):
        want_rows, want_pivots = dense_rref(mat)
        got_rows, got_pivots = echelonize([sparse_from_fracs(r) for r in mat], 7)
        assert list(got_pivots) == want_pivots
        assert [to_dense_fracs(r) for r in got_rows] == want_rows

    @given(matrices(4, 6))
    def test_idempotent(self, mat):
        rows1, piv1 = echelonize([sparse_from_fracs(r) for r in mat], 6)
        rows2, piv2 = echelonize([r.copy() for r in rows1], 6)
        assert piv1 == piv2
        assert [r.items() for r in rows1] == [r.items() for r in rows2]

    @given(matrices(5, 6))
    def test_rank_nullity(self, mat):
        rows = [sparse_from_fracs(r) for r in mat]
        rref, pivots = echelonize(rows, 6)
        ker = kernel_basis(rows, 6)
        assert len(pivots) + len(ker) == 6

    @given(matrices(5, 6))
    def test_kernel_annihilated(self, mat):
        rows = [sparse_from_fracs(r) for r in mat]
        ker = kernel_basis(rows, 6)
        for k in ker:
            for r in rows:
                assert r.dot(k) == 0
        # one kernel vector per free column, carrying a unit there
        _, pivots = echelonize(rows, 6)
        free = [c for c in range(6) if c not in pivots]
        assert len(ker) == len(free)
        for f, k in zip(free, ker):
            assert k[f] == Q(1)


class TestEchelonBasis:
    def test_stable_indices(self):
        b = EchelonBasis(4)
        i0 = b.insert(SparseVector.from_dense([Q(1), Q(1), Q(0), Q(0)]))
        i1 = b.insert(SparseVector.from_dense([Q(0), Q(2), Q(2), Q(0)]))
        assert (i0, i1) == (0, 1)
        # dependent vector is rejected, indices unchanged
        assert b.insert(SparseVector.from_dense([Q(1), Q(0), Q(-1), Q(0)])) is None
        assert b.dim == 2
        i2 = b.insert(SparseVector.from_dense([Q(0), Q(0), Q(0), Q(3)]))
        assert i2 == 2
        # earlier rows never change once inserted
        assert b.rows[0].to_dense() == [Q(1), Q(1), Q(0), Q(0)]

    def test_contains(self):
        b = EchelonBasis(3)
        b.insert(SparseVector.from_dense([Q(1), Q(2), Q(0)]))
        b.insert(SparseVector.from_dense([Q(0), Q(0), Q(1)]))
        assert b.contains(SparseVector.from_dense([Q(2), Q(4), Q(7)]))
        assert not b.contains(SparseVector.from_dense([Q(0), Q(1), Q(0)]))

    @given(matrices(6, 5))
    def test_dim_matches_rank(self, mat):
        b = EchelonBasis(5)
        for row in mat:
            b.insert(sparse_from_fracs(row))
        _, pivots = echelonize([sparse_from_fracs(r) for r in mat], 5)
        assert b.dim == len(pivots)


class TestLinearSystem:
    def test_determines_unique_solution(self):
        # x0 + x1 = (3, 0); x0 - x1 = (1, 2) over a 2-dim value space
        sys_ = LinearSystem(2, 2)
        sys_.add(
            SparseVector.from_dense([Q(1), Q(1)]),
            SparseVector.from_dense([Q(3), Q(0)]),
        )
        assert sys_.take_determined() == {}
        sys_.add(
            SparseVector.from_dense([Q(1), Q(-1)]),
            SparseVector.from_dense([Q(1), Q(2)]),
        )
        got = sys_.take_determined()
        assert sorted(got) == [0, 1]
        assert got[0].to_dense() == [Q(2), Q(1)]
        assert got[1].to_dense() == [Q(1), Q(-1)]
        # nothing new on a second call
        assert sys_.take_determined() == {}

    def test_redundant_and_inconsistent(self):
        sys_ = LinearSystem(2, 1)
        a = SparseVector.from_dense([Q(1), Q(1)])
        b = SparseVector.from_dense([Q(5)])
        assert sys_.add(a.copy(), b.copy()) == "new"
        assert sys_.add(a.copy(), b.copy()) == "redundant"
        assert not sys_.inconsistent
        bad = SparseVector.from_dense([Q(6)])
        assert sys_.add(a.copy(), bad, tag="bad-eq") == "inconsistent"
        assert sys_.inconsistent
        assert sys_.witness[0] == "bad-eq"

    def test_partial_progress(self):
        # x0 determined even though x1, x2 stay coupled
        sys_ = LinearSystem(3, 1)
        sys_.add(
            SparseVector.from_dense([Q(2), Q(0), Q(0)]),
            SparseVector.from_dense([Q(7)]),
        )
        sys_.add(
            SparseVector.from_dense([Q(0), Q(1), Q(1)]),
            SparseVector.from_dense([Q(1)]),
        )
        got = sys_.take_determined()
        assert list(got) == [0]
        assert got[0].to_dense() == [Q(7, 2)]

    def test_later_equation_resolves_earlier_rows(self):
        sys_ = LinearSystem(2, 1)
        sys_.add(
            SparseVector.from_dense([Q(1), Q(1)]),
            SparseVector.from_dense([Q(4)]),
        )
        sys_.add(
            SparseVector.from_dense([Q(0), Q(1)]),
            SparseVector.from_dense([Q(1)]),
        )
        got = sys_.take_determined()
        assert got[0].to_dense() == [Q(3)]
        assert got[1].to_dense() == [Q(1)]

    @given(
        st.lists(
            st.lists(rationals, min_size=4, max_size=4), min_size=2, max_size=8
        ),
        st.lists(rationals, min_size=4, max_size=4),
        st.integers(min_value=0, max_value=2**32 - 1),
    )
    @settings(max_examples=40)
    def test_determined_values_sound(self, coeff_rows, solution, seed):
        # build equations consistent with a known solution; any unknown the
        # system reports determined must carry exactly that solution value
        xstar = [Q(f.numerator) / Q(f.denominator) for f in solution]
        sys_ = LinearSystem(4, 1)
        for row in coeff_rows:
            a = sparse_from_fracs(row)
            rhs_val = sum(
                (a[j] * xstar[j] for j in range(4)), start=Q(0)
            )
            rhs = SparseVector(1)
            rhs[0] = rhs_val
            status = sys_.add(a, rhs)
            assert status in ("new", "redundant")
        for col, val in sys_.take_determined().items():
            assert val[0] == xstar[col]

    def test_full_rank_determines_everything(self):
        rng = random.Random(7)
        n = 5
        xstar = [Q(rng.randint(-9, 9)) / Q(rng.randint(1, 5)) for _ in range(n)]
        sys_ = LinearSystem(n, 1)
        while sys_.rank < n:
            a = SparseVector.from_dense(
                [Q(rng.randint(-3, 3)) for _ in range(n)]
            )
            rhs = SparseVector(1)
            rhs[0] = sum((a[j] * xstar[j] for j in range(n)), start=Q(0))
            sys_.add(a, rhs)
        got = sys_.take_determined()
        assert sorted(got) == list(range(n))
        for j in range(n):
            assert got[j][0] == xstar[j]


@pytest.mark.parametrize(
    "dense,ncols,rank",
    [
        ([[1, 2], [2, 4]], 2, 1),
        ([[0, 0], [0, 0]], 2, 0),
        ([[1, 0, 3], [0, 1, 5], [1, 1, 8]], 3, 2),
    ],
)
def test_small_ranks(dense, ncols, rank):
    rows = [SparseVector.from_dense([Q(x) for x in r]) for r in dense]
    _, pivots = echelonize(rows, ncols)
    assert len(pivots) == rank
