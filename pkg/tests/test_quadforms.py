"""Sparse bilinear moment components and exact Jacobian ranks."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympquot.quadforms import (
    MomentForm,
    jacobian_rank,
    jacobian_rows,
    on_shell,
    shell_point_from_kernel,
)


def test_construction_drops_zeros_and_checks_indices():
    f = MomentForm({(0, 1): 2, (1, 0): 0}, 2)
    assert f.terms == {(0, 1): 2}
    assert not f.is_zero()
    assert MomentForm({}, 3).is_zero()
    with pytest.raises(ValueError):
        MomentForm({(0, 2): 1}, 2)


def test_repr_is_one_based():
    f = MomentForm({(0, 0): 1, (1, 1): -1, (0, 1): 3}, 2)
    assert repr(f) == "z1*w1 + 3*z1*w2 - z2*w2"
    assert repr(MomentForm({}, 2)) == "0"


def test_from_matrix_action_matches_direct_evaluation():
    M = [[1, 2], [3, 4]]
    f = MomentForm.from_matrix_action(M)
    rng = random.Random(5)
    for _ in range(20):
        z = [rng.randint(-4, 4) for _ in range(2)]
        w = [rng.randint(-4, 4) for _ in range(2)]
        Mz = [sum(M[i][j] * z[j] for j in range(2)) for i in range(2)]
        assert f.value(z, w) == sum(w[i] * Mz[i] for i in range(2))


def test_algebra_and_scaling():
    f = MomentForm({(0, 1): 1}, 2)
    g = MomentForm({(0, 1): -1, (1, 1): 2}, 2)
    assert (f + g).terms == {(1, 1): 2}
    assert (3 * f).terms == {(0, 1): 3}
    scaled = g.scale_coordinates([2, 1], [1, Fraction(1, 2)])
    assert scaled.terms == {(0, 1): -1, (1, 1): 1}


coords = st.lists(st.integers(-6, 6), min_size=3, max_size=3)


@given(coords, coords)
@settings(max_examples=60, deadline=None)
def test_gradient_is_exact_derivative(z, w):
    # first-order expansion is exact for bilinear forms:
    # f(z + u, w + v) = f(z, w) + df.(u, v) + f(u, v)
    f = MomentForm({(0, 1): 2, (1, 2): -1, (2, 0): 4}, 3)
    u = [1, -2, 3]
    v = [0, 5, -1]
    dz, dw = f.gradient(z, w)
    first_order = sum(dz[i] * u[i] + dw[i] * v[i] for i in range(3))
    assert f.value([a + b for a, b in zip(z, u)], [a + b for a, b in zip(w, v)]) == (
        f.value(z, w) + first_order + f.value(u, v)
    )


def test_jacobian_rows_and_rank():
    f = MomentForm({(0, 0): 1, (1, 1): -1}, 2)  # z1 w1 - z2 w2
    g = MomentForm({(0, 1): 1}, 2)  # z1 w2
    rows = jacobian_rows([f, g], [1, 1], [1, 1])
    assert rows == [[1, -1, 1, -1], [1, 0, 0, 1]]
    assert jacobian_rank([f, g], [1, 1], [1, 1]) == 2
    assert jacobian_rank([f, g], [0, 0], [0, 0]) == 0


def test_shell_point_from_kernel_lands_on_shell():
    # weights (1, -1): mu = z1 w1 - z2 w2; for generic z the w-kernel is the
    # line (z2, z1) up to scale
    f = MomentForm({(0, 0): 1, (1, 1): -1}, 2)
    rng = random.Random(11)
    for _ in range(10):
        z = [rng.randint(-5, 5), rng.randint(-5, 5)]
        w = shell_point_from_kernel([f], z, rng)
        assert w is not None
        assert on_shell([f], z, w)
    # two independent diagonal forms on n = 2: kernel is trivial for
    # generic z
    g = MomentForm({(0, 0): 1}, 2)
    h = MomentForm({(1, 1): 1}, 2)
    assert shell_point_from_kernel([g, h], [1, 1], rng) is None
