"""Series layer: polynomial helpers, Hilbert series, and reconstruction.

The round-trip properties (expand a known rational function, then recover
it) are the backbone here, since everything downstream trusts them.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sympquot.errors import ReconstructionError
from sympquot.series import (
    HilbertSeries,
    TruncatedSeries,
    binomial_poly_one_minus_t2,
    cyclotomic_multiplicities,
    expand,
    minimal_rational_form,
    one_minus_te_product,
    poly_add,
    poly_divide_one_minus_te,
    poly_exact_div,
    poly_mul,
    poly_trim,
    reconstruct,
    reconstruct_search,
    reduced_fraction,
    staircase_exponents,
    vanishing_order_at_one,
)

# ---------------------------------------------------------------------------
# polynomial helpers


def test_poly_basics():
    assert poly_trim((1, 2, 0, 0)) == (1, 2)
    assert poly_trim((0,)) == ()
    assert poly_add((1, 2), (0, -2, 5)) == (1, 0, 5)
    assert poly_mul((1, 1), (1, -1)) == (1, 0, -1)
    assert poly_mul((), (1, 2)) == ()


def test_one_minus_te_product():
    assert one_minus_te_product(()) == (1,)
    assert one_minus_te_product((2,)) == (1, 0, -1)
    assert one_minus_te_product((1, 1)) == (1, -2, 1)
    assert binomial_poly_one_minus_t2(2) == (1, 0, -2, 0, 1)


def test_poly_divide_one_minus_te():
    assert poly_divide_one_minus_te((1, 0, -1), 2) == (1,)
    assert poly_divide_one_minus_te((1, 1), 2) is None
    assert poly_divide_one_minus_te((1, -1), 1) == (1,)


def test_vanishing_order_at_one():
    assert vanishing_order_at_one((1,)) == 0
    assert vanishing_order_at_one((1, -1)) == 1
    assert vanishing_order_at_one(poly_mul((1, -1), (1, -1))) == 2


def test_poly_exact_div():
    assert poly_exact_div((1, 0, -1), (1, 1)) == (1, -1)
    assert poly_exact_div((1, 1, 1), (1, 1)) is None
    assert poly_exact_div((), (1, 1)) == ()
    with pytest.raises(ZeroDivisionError):
        poly_exact_div((1,), ())


# ---------------------------------------------------------------------------
# TruncatedSeries / HilbertSeries


def test_truncated_series_surface():
    s = TruncatedSeries((1, 0, 3))
    assert s.bound == 2
    assert s.coeff(2) == 3
    with pytest.raises(IndexError):
        s.coeff(3)
    with pytest.raises(ValueError):
        TruncatedSeries(())
    assert s.geometric_mul(1).coeffs == (1, 1, 4)
    assert s.mul_poly((1, 0, -1)).coeffs == (1, 0, 2)
    assert s.truncate(1).coeffs == (1, 0)
    with pytest.raises(ValueError):
        s.truncate(5)


def test_hilbert_series_expand_and_invariants():
    H = HilbertSeries((1, 0, 1), (2, 2))  # (1 + t^2) / (1-t^2)^2
    assert H.expand(6).coeffs == (1, 0, 3, 0, 5, 0, 7)
    assert H.dimension == 2
    assert H.a_invariant == -2
    assert expand(H, 4).coeffs == (1, 0, 3, 0, 5)


def test_hilbert_series_canonical_cancels_shared_factors():
    # (1-t^2)/(1-t)^2 == (1+t)/(1-t)
    H = HilbertSeries((1, 0, -1), (1, 1))
    c = H.canonical()
    assert c.numerator == (1, 1)
    assert c.denominator == (1,)
    assert H.equals(c)
    assert H.a_invariant == c.a_invariant == 0


def test_hilbert_series_equality_ignores_representation():
    H1 = HilbertSeries((1, 0, 1), (2, 2))
    H2 = HilbertSeries(poly_mul((1, 0, 1), (1, 0, 0, -1)), (2, 2, 3))
    assert H1.equals(H2)
    assert H2.a_invariant == H1.a_invariant
    assert H1.expand(9).coeffs == H2.expand(9).coeffs


def test_hilbert_series_validation_and_render():
    with pytest.raises(ValueError):
        HilbertSeries((1,), (0,))
    assert str(HilbertSeries((1, 1))) == "1 + t"
    assert "(1-t^2)^2" in str(HilbertSeries((1, 0, 1), (2, 2)))
    empty = HilbertSeries((0, 0))
    assert empty.numerator == ()
    with pytest.raises(ValueError):
        empty.dimension
    with pytest.raises(ValueError):
        empty.a_invariant


def test_value_at():
    H = HilbertSeries((1, 0, 1), (2, 2))
    from fractions import Fraction

    # (1 + 1/4) / (1 - 1/4)^2 = (5/4) / (9/16) = 20/9
    assert H.value_at(Fraction(1, 2)) == Fraction(20, 9)


# ---------------------------------------------------------------------------
# reconstruction from truncations


def test_reconstruct_recovers_known_series():
    H = HilbertSeries((1, 0, 1), (2, 2))
    closed = reconstruct(H.expand(12), (2, 2), guard=4)
    assert closed.numerator == (1, 0, 1)
    assert closed.denominator == (2, 2)


def test_reconstruct_rejects_wrong_denominator():
    H = HilbertSeries((1, 0, 1), (2, 2))
    trunc = H.expand(12)
    with pytest.raises(ReconstructionError) as exc:
        reconstruct(trunc, (2,), guard=4)
    assert exc.value.truncation is trunc
    assert tuple(exc.value.tried) == ((2,),)


def test_reconstruct_guard_validation():
    trunc = TruncatedSeries((1,) * 13)
    with pytest.raises(ValueError):
        reconstruct(trunc, (2, 2), guard=0)
    with pytest.raises(ValueError):
        reconstruct(TruncatedSeries((1, 1, 1)), (2, 2), guard=4)


def test_reconstruct_search_dimension_filter():
    H = HilbertSeries((1, 1), (1,))
    trunc = H.expand(14)
    closed, used = reconstruct_search(trunc, [(1,), (1, 1)], 4, 1)
    assert used == (1,)
    assert closed.equals(H)
    # the polynomial 1 + t "reconstructs" over (1-t) but with pole order 0,
    # so asking for pole order 1 must reject the spurious fit
    poly = TruncatedSeries((1, 1) + (0,) * 8)
    with pytest.raises(ReconstructionError) as exc:
        reconstruct_search(poly, [(1,)], 4, 1)
    assert (1,) in exc.value.tried
    assert "pole order" in str(exc.value)


den_exponents = st.lists(st.integers(1, 4), min_size=1, max_size=4)
num_coeffs = st.lists(st.integers(-3, 3), min_size=1, max_size=5)


@given(num_coeffs, den_exponents)
@settings(max_examples=120, deadline=None)
def test_reconstruct_roundtrip(num, den):
    H = HilbertSeries(num, den)
    if not H.numerator:
        return
    guard = 4
    bound = len(H.numerator) - 1 + sum(den) + guard
    closed = reconstruct(H.expand(bound), tuple(den), guard=guard)
    assert closed.equals(H)
    assert closed.denominator == tuple(sorted(den))


@given(num_coeffs, den_exponents)
@settings(max_examples=80, deadline=None)
def test_minimal_rational_form_roundtrip(num, den):
    H = HilbertSeries(num, den)
    if not H.numerator:
        return
    bound = len(H.numerator) - 1 + sum(den) + 16
    form = minimal_rational_form(H.expand(bound).coeffs, stability=8)
    assert form is not None
    fnum, fden = form
    # same rational function, possibly in lower terms
    assert poly_mul(fnum, one_minus_te_product(H.denominator)) == poly_mul(
        H.numerator, fden
    )


def test_minimal_rational_form_needs_stability_margin():
    # ten coefficients of 1/(1-t^2)^2 with stability 8 leave no margin: the
    # routine must ask for more data rather than guess
    coeffs = HilbertSeries((1,), (2, 2)).expand(6).coeffs
    assert minimal_rational_form(coeffs, stability=8) is None
    assert minimal_rational_form((0, 0, 0)) == ((), (1,))


def test_reduced_fraction():
    # (1+t)/(1-t^2) == 1/(1-t)
    num, den = reduced_fraction((1, 1), (2,))
    assert num == (1,)
    assert den == (1, -1)
    # already reduced: (1+t^2)/(1-t^2)^2 stays put
    num, den = reduced_fraction((1, 0, 1), (2, 2))
    assert num == (1, 0, 1)
    assert den == poly_mul((1, 0, -1), (1, 0, -1))
    assert den[0] == 1


def test_cyclotomic_multiplicities():
    # (1-t)^2 (1+t) (1+t+t^2)
    delta = poly_mul(poly_mul((1, -1), (1, -1)), poly_mul((1, 1), (1, 1, 1)))
    assert cyclotomic_multiplicities(delta) == {1: 2, 2: 1, 3: 1}
    assert cyclotomic_multiplicities(one_minus_te_product((6,))) == {
        1: 1,
        2: 1,
        3: 1,
        6: 1,
    }
    assert cyclotomic_multiplicities((1, -2), index_cap=8) is None
    with pytest.raises(ValueError):
        cyclotomic_multiplicities(())


def test_staircase_exponents():
    assert staircase_exponents({1: 2, 2: 1, 3: 1}) == (1, 6)
    assert staircase_exponents({1: 1}) == (1,)
    assert staircase_exponents({}) == ()
    with pytest.raises(ValueError):
        staircase_exponents({1: 1, 2: 2})
    # the staircase really covers: prod (1-t^e) is divisible by the input
    mult = {1: 3, 2: 2, 4: 1}
    exps = staircase_exponents(mult)
    assert len(exps) == 3
    covered = cyclotomic_multiplicities(one_minus_te_product(exps))
    assert all(covered.get(m, 0) >= s for m, s in mult.items())


@given(den_exponents)
@settings(max_examples=60, deadline=None)
def test_denominator_cyclotomic_factorization_roundtrip(den):
    mult = cyclotomic_multiplicities(one_minus_te_product(den))
    assert mult is not None
    assert mult[1] == len(den)
    exps = staircase_exponents(mult)
    assert len(exps) == len(den)
    # staircase covers the original denominator exactly as a divisor
    assert poly_exact_div(
        one_minus_te_product(exps), one_minus_te_product(den)
    ) is not None
