import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conekit.errors import BudgetExceeded
from conekit.nonneg import (
    feasible_mod_lattice,
    has_nonneg_solution,
    minimal_filter,
    minimal_nonneg_solutions,
    minimal_solutions_mod_lattice,
)


def brute_solutions(A, b, bound):
    """All x in [0, bound]^k with A x = b."""
    k = len(A[0])
    out = []
    for x in itertools.product(range(bound + 1), repeat=k):
        if all(sum(r[i] * x[i] for i in range(k)) == c
               for r, c in zip(A, b)):
            out.append(x)
    return out


def brute_minimal(sols):
    return sorted(
        s for s in sols
        if not any(t != s and all(a <= b for a, b in zip(t, s))
                   for t in sols))


small_systems = st.integers(1, 2).flatmap(
    lambda m: st.integers(1, 3).flatmap(
        lambda k: st.tuples(
            st.lists(
                st.lists(st.integers(-3, 3), min_size=k, max_size=k),
                min_size=m, max_size=m),
            st.lists(st.integers(-4, 4), min_size=m, max_size=m),
        )
    )
)


class TestFeasibility:
    def test_simple(self):
        assert has_nonneg_solution([[1, 1]], (3,))
        assert not has_nonneg_solution([[1, 1]], (-1,))
        assert has_nonneg_solution([[2, 3]], (7,))
        assert not has_nonneg_solution([[2, 4]], (5,))

    def test_frobenius_gap(self):
        # 3 and 5 generate everything above 7 but not 7 itself
        assert not has_nonneg_solution([[3, 5]], (7,))
        assert has_nonneg_solution([[3, 5]], (8,))

    @settings(max_examples=120, deadline=None)
    @given(small_systems)
    def test_matches_bounded_brute_force(self, sys_b):
        A, b = sys_b
        b = tuple(b)
        # brute force over a box that provably suffices for these sizes is
        # not available in general; instead check one-sided soundness and
        # completeness against a generous box
        brute = brute_solutions(A, b, 8)
        if brute:
            assert has_nonneg_solution(A, b, budget=200_000)

    def test_budget_raises(self):
        with pytest.raises(BudgetExceeded):
            # huge target forces a long climb; tiny budget must trip first
            has_nonneg_solution([[1, -1]], (0, ), budget=0) \
                if False else has_nonneg_solution([[5, -3]], (1,), budget=2)


class TestMinimalSolutions:
    def test_homogeneous_hilbert(self):
        # x - y = 0 on N^2: minimal nonzero solution (1,1)
        assert minimal_nonneg_solutions([[1, -1]]) == [(1, 1)]

    def test_inhomogeneous(self):
        sols = minimal_nonneg_solutions([[2, 3]], (12,))
        assert set(sols) == {(6, 0), (3, 2), (0, 4)}

    def test_zero_target(self):
        assert minimal_nonneg_solutions([[1, 1]], (0,)) == [(0, 0)]

    @settings(max_examples=100, deadline=None)
    @given(small_systems)
    def test_minimality_and_solutionhood(self, sys_b):
        A, b = sys_b
        b = tuple(b)
        try:
            sols = minimal_nonneg_solutions(A, b, budget=150_000)
        except BudgetExceeded:
            return
        k = len(A[0])
        for x in sols:
            assert all(
                sum(r[i] * x[i] for i in range(k)) == c
                for r, c in zip(A, b))
        for x, y in itertools.combinations(sols, 2):
            assert not all(a <= c for a, c in zip(x, y))
            assert not all(a >= c for a, c in zip(x, y))

    @settings(max_examples=60, deadline=None)
    @given(small_systems)
    def test_complete_on_small_boxes(self, sys_b):
        A, b = sys_b
        b = tuple(b)
        try:
            sols = minimal_nonneg_solutions(A, b, budget=150_000)
        except BudgetExceeded:
            return
        brute = brute_minimal(brute_solutions(A, b, 6))
        # every brute-force minimal solution inside the box must be found
        inside = [s for s in brute if all(c <= 6 for c in s)]
        for s in inside:
            # s is minimal within the box; globally it must dominate some
            # found minimal solution, and if s is itself minimal it is found
            assert any(all(a <= c for a, c in zip(m, s)) for m in sols)

    def test_minimal_filter(self):
        vecs = [(2, 0), (1, 1), (2, 1), (0, 3), (1, 2)]
        assert set(minimal_filter(vecs)) == {(2, 0), (1, 1), (0, 3)}


class TestFreeColumns:
    def test_membership_modulo_lattice(self):
        # x = b mod 3Z: 1*n = 2 + 3t has solution n=2,t=0
        assert feasible_mod_lattice([[1]], [(3,)], (2,))
        # n = -1 mod 3 solvable with n = 2
        assert feasible_mod_lattice([[1]], [(3,)], (-1,))

    def test_no_solution_without_lattice(self):
        assert not has_nonneg_solution([[1]], (-1,))

    def test_minimal_with_free(self):
        # n >= 0 with n = 1 + 5t: minimal n is 1
        sols = minimal_solutions_mod_lattice([[1]], [(5,)], (1,))
        assert sols == [(1,)]

    def test_projection_minimality(self):
        # n1 + n2 = 0 mod 2: minimal nonzero patterns
        sols = minimal_solutions_mod_lattice([[1, 1]], [(2,)], (0,))
        assert (0, 0) in sols
