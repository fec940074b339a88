"""Exact series arithmetic: frozen oracles plus ring-axiom properties."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwedge.series import (
    MixedStep,
    NonIntegerOffsetGap,
    QSeries,
    SeriesError,
    ZeroLeadingCoefficient,
    binomial_factor,
    euler_product,
    q_pochhammer,
    rational_sqrt,
)

F = Fraction


def S(coeffs, offset=0, step=1):
    return QSeries.from_coeffs([F(c) for c in coeffs], F(offset), F(step))


# -- frozen oracles ------------------------------------------------------------

def test_euler_product_pentagonal():
    # (q;q)_inf = 1 - q - q^2 + q^5 + q^7 - q^12 - q^15 + ...
    e = euler_product(16)
    assert e.offset == 0
    assert list(e.coeffs) == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1, 0]


def test_pochhammer_finite_matches_direct_expansion():
    # (q; q)_3 = (1-q)(1-q^2)(1-q^3) = 1 - q - q^2 + q^4 + q^5 - q^6
    p = q_pochhammer(1, 1, 3, 8)
    assert list(p.coeffs[:7]) == [1, -1, -1, 0, 1, 1, -1]
    assert p.coeffs[7] == 0 and p.coeffs[8] == 0


def test_pochhammer_negative_start():
    # (c q^{-1}; q)_2 = (1 - c/q)(1 - c) = (c^2 - c) q^{-1} + (1 - c)
    c = F(1, 4)
    p = q_pochhammer(c, -1, 2, 5)
    assert p.offset == -1
    assert p.coefficient(-1) == c * c - c
    assert p.coefficient(0) == 1 - c
    assert p.coefficient(1) == 0
    assert p.upper == 5


def test_pochhammer_rejects_fractional_exponent():
    with pytest.raises(NonIntegerOffsetGap):
        q_pochhammer(1, F(1, 2), 2, 5)


def test_pochhammer_infinite_large_start_is_one():
    p = q_pochhammer(1, 9, None, 5)
    assert p == QSeries.one(5)


def test_geometric_inverse():
    # 1/(1-q) = 1 + q + q^2 + ...
    g = binomial_factor(1, 1, 6).inv()
    assert list(g.coeffs) == [1] * 7


def test_inverse_with_offset():
    # 1/(q^2 (1 - q)) = q^{-2} (1 + q + ...)
    s = binomial_factor(1, 1, 4).shift(2)
    inv = s.inv()
    assert inv.offset == -2
    assert list(inv.coeffs) == [1] * 5
    assert (s * inv) == QSeries.one(4)


def test_inv_requires_unit_leading_coefficient():
    with pytest.raises(ZeroLeadingCoefficient):
        S([0, 1, 2]).inv()


def test_add_alignment_and_truncation():
    a = S([1, 2, 3], offset=0)     # valid through q^2
    b = S([5, 7], offset=1)        # valid through q^2
    c = a + b
    assert c.offset == 0
    assert list(c.coeffs) == [1, 7, 10]
    assert c.upper == 2


def test_add_rejects_noninteger_gap():
    with pytest.raises(NonIntegerOffsetGap):
        S([1], offset=0) + S([1], offset=F(1, 2))


def test_mixed_step_rejected():
    with pytest.raises(MixedStep):
        S([1, 2]) + S([1, 2], step=F(1, 2))
    with pytest.raises(MixedStep):
        S([1, 2]) * S([1, 2], step=F(1, 2))


def test_mul_offsets_add():
    a = S([2, 1], offset=F(1, 2))
    b = S([3, 1], offset=F(-3, 2))
    c = a * b
    assert c.offset == -1
    assert list(c.coeffs) == [6, 5]


def test_derive_is_q_d_dq():
    s = S([5, 1, 1], offset=-2)
    d = s.derive()
    assert list(d.coeffs) == [-10, -1, 0]
    half = S([0, 1], offset=0, step=F(1, 2))  # the series q^{1/2}
    assert half.derive().coeffs[1] == F(1, 2)


def test_eval_at_rational_point():
    s = S([1, 1, 1])
    assert s.eval_at(F(1, 2)) == F(7, 4)
    t = S([1], offset=F(1, 2))
    assert t.eval_at(F(1, 9)) == F(1, 3)
    with pytest.raises(SeriesError):
        t.eval_at(F(1, 2))


def test_eval_half_step_series():
    u = S([0, 1], step=F(1, 2))  # u = q^{1/2}
    assert u.eval_at(F(1, 4)) == F(1, 2)


def test_coefficient_below_offset_is_zero():
    s = S([3, 1], offset=2)
    assert s.coefficient(0) == 0
    assert s.coefficient(F(5, 2)) == 0
    assert s.coefficient(2) == 3
    with pytest.raises(SeriesError):
        s.coefficient(4)


def test_equality_on_common_range():
    a = S([1, 2, 3, 4])
    b = S([1, 2, 3])
    assert a == b            # agree through q^2
    assert a != S([1, 2, 4])
    assert S([0, 0, 5], offset=-1) == S([5], offset=1)


def test_first_mismatch():
    a = S([1, 2, 3])
    b = S([1, 2, 4, 9])
    assert a.first_mismatch(b) == (2, 3, 4)
    assert a.first_mismatch(S([1, 2])) is None


def test_json_round_trip():
    s = S(["-1/24", 1, 3], offset=F(1, 2))
    d = s.to_jsonable()
    assert d == {"offset": "1/2", "coeffs": ["-1/24", "1", "3"]}
    assert QSeries.from_jsonable(d) == s
    h = S([1], step=F(1, 2))
    assert h.to_jsonable()["base_step"] == "1/2"


def test_pow_matches_repeated_mul():
    s = S([1, 1], offset=1)
    assert s ** 3 == s * s * s
    assert s ** 0 == QSeries.one(1)
    inv2 = s ** -2
    assert inv2.offset == -2
    assert (inv2 * s * s) == QSeries.one(1)


# -- property tests -------------------------------------------------------------

frac = st.fractions(min_value=-4, max_value=4, max_denominator=8)


@st.composite
def qseries(draw, max_order=6):
    n = draw(st.integers(min_value=0, max_value=max_order))
    coeffs = draw(st.lists(frac, min_size=n + 1, max_size=n + 1))
    offset = draw(st.integers(min_value=-3, max_value=3))
    return QSeries.from_coeffs(coeffs, F(offset))


@given(qseries(), qseries())
@settings(max_examples=80, deadline=None)
def test_add_commutes(a, b):
    assert a + b == b + a


@given(qseries(), qseries())
@settings(max_examples=80, deadline=None)
def test_mul_commutes(a, b):
    assert a * b == b * a


@given(qseries(), qseries(), qseries())
@settings(max_examples=60, deadline=None)
def test_mul_distributes_over_add(a, b, c):
    lhs = a * (b + c)
    rhs = a * b + a * c
    assert lhs == rhs


@given(qseries(), qseries())
@settings(max_examples=60, deadline=None)
def test_leibniz_rule(a, b):
    lhs = (a * b).derive()
    rhs = a.derive() * b + a * b.derive()
    assert lhs == rhs


@given(qseries())
@settings(max_examples=60, deadline=None)
def test_inverse_round_trip(s):
    if s.coeffs[0] == 0:
        return
    assert (s * s.inv()) == QSeries.one(s.trunc_order)


@given(st.integers(min_value=0, max_value=400))
@settings(max_examples=40, deadline=None)
def test_rational_sqrt(n):
    r = rational_sqrt(F(n))
    if r is not None:
        assert r * r == n
    rr = rational_sqrt(F(n * n, 49))
    assert rr == F(n, 7)
