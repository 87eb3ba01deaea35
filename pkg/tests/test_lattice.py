import random
from fractions import Fraction

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from hypothesis import given, settings, strategies as st

from conekit.lattice import (
    exgcd,
    hermite_normal_form,
    identity_matrix,
    invert_unimodular,
    kernel_basis,
    mat_mul,
    mat_vec,
    matrix_rank,
    member_of_subgroup,
    primitive,
    rational_kernel_basis,
    row_span_basis,
    rref,
    saturate_subgroup,
    smith_normal_form,
    solve_diophantine,
    transpose,
)

matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(-30, 30), min_size=n, max_size=n),
            min_size=m,
            max_size=m,
        )
    )
)


def det(A):
    return int(sympy.Matrix(A).det())


class TestSmith:
    def test_fixed_example(self):
        U, D, V = smith_normal_form([[2, 4], [6, 8]])
        assert [D[0][0], D[1][1]] == [2, 4]

    def test_single_row(self):
        U, D, V = smith_normal_form([[2, 3]])
        assert D[0][0] == 1 and D[0][1] == 0

    @settings(max_examples=150, deadline=None)
    @given(matrices)
    def test_invariants(self, M):
        U, D, V = smith_normal_form(M)
        assert mat_mul(mat_mul(U, M), V) == D
        assert abs(det(U)) == 1 and abs(det(V)) == 1
        m, n = len(M), len(M[0])
        diag = [D[i][i] for i in range(min(m, n))]
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert D[i][j] == 0
        assert all(d >= 0 for d in diag)
        for a, b in zip(diag, diag[1:]):
            assert (a == 0 and b == 0) or (a != 0 and b % a == 0)

    @settings(max_examples=60, deadline=None)
    @given(matrices)
    def test_diagonal_matches_sympy(self, M):
        _, D, _ = smith_normal_form(M)
        ours = [D[i][i] for i in range(min(len(M), len(M[0])))]
        ours = [d for d in ours if d != 0]
        theirs = sympy_snf(sympy.Matrix(M))
        k = min(theirs.shape)
        ref = [abs(int(theirs[i, i])) for i in range(k) if theirs[i, i] != 0]
        assert ours == ref

    def test_idempotent_on_diagonal(self):
        _, D, _ = smith_normal_form([[6, 0], [0, 2]])
        _, D2, _ = smith_normal_form(D)
        assert D == D2


class TestHermite:
    @settings(max_examples=120, deadline=None)
    @given(matrices)
    def test_transform(self, M):
        H, U = hermite_normal_form(M)
        assert mat_mul(U, M) == H
        assert abs(det(U)) == 1

    @settings(max_examples=120, deadline=None)
    @given(matrices)
    def test_echelon_shape(self, M):
        H, _ = hermite_normal_form(M)
        last = -1
        seen_zero = False
        for row in H:
            nz = [j for j, x in enumerate(row) if x != 0]
            if not nz:
                seen_zero = True
                continue
            assert not seen_zero, "nonzero row after a zero row"
            p = nz[0]
            assert p > last
            last = p
            assert row[p] > 0

    def test_reduction_above_pivots(self):
        H, _ = hermite_normal_form([[4, 7], [2, 3]])
        # pivot rows normalized, entries above each pivot lie in [0, pivot)
        for r, row in enumerate(H):
            nz = [j for j, x in enumerate(row) if x != 0]
            if not nz:
                continue
            p = nz[0]
            for above in range(r):
                assert 0 <= H[above][p] < row[p]


class TestDiophantine:
    def test_two_three_one(self):
        # oracle: 2*(-1) + 3*1 = 1; homogeneous lattice generated by (3, -2)
        sol = solve_diophantine([[2, 3]], (1,))
        assert sol is not None
        x, kern = sol
        assert 2 * x[0] + 3 * x[1] == 1
        assert kern == [(3, -2)]

    def test_no_solution(self):
        assert solve_diophantine([[2, 4]], (3,)) is None

    def test_zero_columns(self):
        assert solve_diophantine([[0, 0]], (1,)) is None
        sol = solve_diophantine([[0, 0]], (0,))
        assert sol is not None and len(sol[1]) == 2

    @settings(max_examples=120, deadline=None)
    @given(matrices, st.data())
    def test_solution_and_kernel(self, A, data):
        n = len(A[0])
        x0 = data.draw(
            st.lists(st.integers(-5, 5), min_size=n, max_size=n))
        b = mat_vec(A, tuple(x0))
        sol = solve_diophantine(A, b)
        assert sol is not None
        x, kern = sol
        assert mat_vec(A, x) == b
        for v in kern:
            assert all(c == 0 for c in mat_vec(A, v))
        # kernel basis spans the full rational nullspace
        assert len(kern) == n - matrix_rank(A)
        # and the difference of two solutions lies in the kernel lattice
        diff = tuple(a - c for a, c in zip(x0, x))
        if kern:
            assert member_of_subgroup(kern, diff)
        else:
            assert all(d == 0 for d in diff)

    @settings(max_examples=80, deadline=None)
    @given(matrices, st.data())
    def test_unsolvable_detection_matches_sympy_rank(self, A, data):
        m = len(A)
        b = tuple(data.draw(st.integers(-10, 10)) for _ in range(m))
        sol = solve_diophantine(A, b)
        Ab = [list(r) + [c] for r, c in zip(A, b)]
        if matrix_rank(Ab) > matrix_rank(A):
            assert sol is None
        if sol is not None:
            assert mat_vec(A, sol[0]) == b


class TestSaturation:
    def test_index_two_sublattice(self):
        sat = saturate_subgroup([(2, 0), (0, 2)])
        assert row_span_basis(sat) == [(1, 0), (0, 1)]

    def test_diagonal_double(self):
        sat = saturate_subgroup([(2, 2)])
        assert sat == [(1, 1)]

    def test_already_saturated(self):
        rows = [(1, 0, 3), (0, 1, 5)]
        assert row_span_basis(saturate_subgroup(rows)) == row_span_basis(rows)

    @settings(max_examples=80, deadline=None)
    @given(matrices)
    def test_idempotent_and_contains(self, M):
        rows = [tuple(r) for r in M]
        sat = saturate_subgroup(rows)
        for r in rows:
            assert member_of_subgroup(sat, r) or not any(r)
        assert row_span_basis(saturate_subgroup(sat)) == row_span_basis(sat)
        assert len(sat) == matrix_rank(M)

    @settings(max_examples=60, deadline=None)
    @given(matrices, st.integers(2, 5))
    def test_divisibility_witness(self, M, k):
        # n*x in L implies x in saturation: scaled generators saturate back
        scaled = [tuple(k * x for x in row) for row in M]
        sat = saturate_subgroup(scaled)
        for row in M:
            if any(row):
                assert member_of_subgroup(sat, tuple(row))


class TestRationalElimination:
    @settings(max_examples=80, deadline=None)
    @given(matrices)
    def test_rref_matches_sympy(self, M):
        ours, pivots = rref(M)
        ref, ref_pivots = sympy.Matrix(M).rref()
        assert list(pivots) == list(ref_pivots)
        trimmed = [
            [Fraction(sympy.Rational(ref[i, j])) for j in range(ref.cols)]
            for i in range(len(pivots))
        ]
        assert ours == trimmed

    @settings(max_examples=80, deadline=None)
    @given(matrices)
    def test_rational_kernel(self, M):
        kern = rational_kernel_basis(M)
        for v in kern:
            assert all(c == 0 for c in mat_vec(M, v))
        assert len(kern) == len(M[0]) - matrix_rank(M)


class TestHelpers:
    @given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
    def test_exgcd(self, a, b):
        g, s, t = exgcd(a, b)
        assert g == s * a + t * b
        assert g >= 0
        if a or b:
            assert a % g == 0 and b % g == 0

    def test_primitive(self):
        assert primitive((4, -6)) == (2, -3)
        with pytest.raises(AssertionError):
            primitive((0, 0))

    @settings(max_examples=60, deadline=None)
    @given(matrices)
    def test_invert_unimodular_roundtrip(self, M):
        # manufacture a unimodular matrix from the HNF transform
        _, U = hermite_normal_form(M)
        Uinv = invert_unimodular(U)
        assert mat_mul(U, Uinv) == identity_matrix(len(U))

    def test_kernel_sign_normalization(self):
        for v in kernel_basis([[1, 1, 1]]):
            first = next(x for x in v if x)
            assert first > 0

    def test_transpose_rank(self):
        M = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
        assert matrix_rank(M) == matrix_rank(transpose(M)) == 2
