"""Exact integer/rational linear algebra against independent oracles."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympquot.bruteforce import rank_oracle
from sympquot.exactlin import (
    elementary_divisors,
    fraction_inverse,
    fraction_rank,
    integer_kernel_basis,
    integer_rank,
    nonnegative_solution,
    nonnegative_solution_exists,
    row_reduce_unimodular,
)

small_matrix = st.integers(1, 5).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(-9, 9), min_size=n, max_size=n),
        min_size=1,
        max_size=5,
    )
)


@given(small_matrix)
@settings(max_examples=150, deadline=None)
def test_integer_rank_matches_sympy(rows):
    assert integer_rank(rows) == rank_oracle(rows)


def test_integer_rank_limit_early_exit():
    rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert integer_rank(rows, limit=2) == 2
    assert integer_rank(rows) == 3
    assert integer_rank([]) == 0
    assert integer_rank([[0, 0], [0, 0]]) == 0


def test_fraction_rank_clears_denominators():
    rows = [
        [Fraction(1, 2), Fraction(1, 3)],
        [Fraction(3, 2), Fraction(1, 1)],
    ]
    assert fraction_rank(rows) == rank_oracle([[3, 2], [9, 6]])  # same row space
    assert fraction_rank([[Fraction(0), Fraction(0)]]) == 0


@given(small_matrix)
@settings(max_examples=100, deadline=None)
def test_fraction_inverse_roundtrip(rows):
    k = len(rows)
    square = [r[:k] for r in rows[:k]]
    if len(square) < k or rank_oracle(square) < k:
        return
    inv = fraction_inverse(square)
    prod = [
        [sum(Fraction(square[i][t]) * inv[t][j] for t in range(k)) for j in range(k)]
        for i in range(k)
    ]
    assert prod == [
        [Fraction(int(i == j)) for j in range(k)] for i in range(k)
    ]


def test_fraction_inverse_singular_raises():
    with pytest.raises(ValueError):
        fraction_inverse([[1, 2], [2, 4]])


def _det(rows):
    from sympy import Matrix

    return int(Matrix([list(r) for r in rows]).det())


@given(small_matrix)
@settings(max_examples=120, deadline=None)
def test_row_reduce_unimodular_contract(rows):
    U, H, r = row_reduce_unimodular(rows)
    ell, n = len(rows), len(rows[0])
    # U is unimodular and U * A == H
    assert abs(_det(U)) == 1
    prod = [
        [sum(U[i][t] * rows[t][j] for t in range(ell)) for j in range(n)]
        for i in range(ell)
    ]
    assert prod == [list(row) for row in H]
    assert r == rank_oracle(rows)
    # echelon shape: strictly increasing positive pivots, zero rows below
    last_pivot = -1
    for i in range(r):
        pivot = next(j for j in range(n) if H[i][j])
        assert pivot > last_pivot
        assert H[i][pivot] > 0
        last_pivot = pivot
    for i in range(r, ell):
        assert not any(H[i])


@given(small_matrix)
@settings(max_examples=120, deadline=None)
def test_integer_kernel_basis_is_saturated(rows):
    n = len(rows[0])
    basis = integer_kernel_basis(rows, n)
    assert len(basis) == n - rank_oracle(rows)
    for vec in basis:
        assert all(sum(r[j] * vec[j] for j in range(n)) == 0 for r in rows)
    if basis:
        # a saturated lattice has a primitive basis: all divisors are 1
        assert elementary_divisors(basis) == [1] * len(basis)


def test_elementary_divisors_pinned():
    assert elementary_divisors([[2, 0], [0, 3]]) == [1, 6]
    assert elementary_divisors([[2, 0], [0, 4]]) == [2, 4]
    assert elementary_divisors([[0, 0]]) == []
    assert elementary_divisors([]) == []


def test_nonnegative_solution_pinned():
    # identity system: the witness is the right-hand side itself
    assert nonnegative_solution([[1, 0], [0, 1]], [3, 5]) == (3, 5)
    # x1 + x2 = -1 has no solution with x >= 0
    assert nonnegative_solution([[1, 1]], [-1]) is None
    assert not nonnegative_solution_exists([[1, 1]], [-1])
    # no constraints: the empty witness
    assert nonnegative_solution([], []) == ()


@given(
    st.integers(1, 4).flatmap(
        lambda n: st.tuples(
            st.lists(
                st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                min_size=1,
                max_size=3,
            ),
            st.lists(st.integers(0, 4), min_size=n, max_size=n),
        )
    )
)
@settings(max_examples=120, deadline=None)
def test_nonnegative_solution_finds_planted_witness(case):
    rows, x0 = case
    rhs = [sum(r[j] * x0[j] for j in range(len(x0))) for r in rows]
    x = nonnegative_solution(rows, rhs)
    assert x is not None
    assert all(xi >= 0 for xi in x)
    for r, b in zip(rows, rhs):
        assert sum(Fraction(r[j]) * x[j] for j in range(len(x))) == b


@given(
    st.integers(1, 4).flatmap(
        lambda n: st.tuples(
            st.lists(
                st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                min_size=1,
                max_size=3,
            ),
            st.lists(st.integers(-6, 6), min_size=1, max_size=3),
        )
    )
)
@settings(max_examples=120, deadline=None)
def test_nonnegative_solution_witness_is_valid(case):
    rows, rhs = case
    rhs = (rhs * 3)[: len(rows)]
    x = nonnegative_solution(rows, rhs)
    if x is None:
        return
    assert all(xi >= 0 for xi in x)
    for r, b in zip(rows, rhs):
        assert sum(Fraction(r[j]) * x[j] for j in range(len(x))) == b
