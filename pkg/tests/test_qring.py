from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from dilogskein.qring import (
    ONE,
    ZERO,
    DivisionByZero,
    LaurentPoly,
    ParseError,
    RatFunc,
    format_laurent,
    format_ratfunc,
    lp_arith,
    parse_laurent,
    parse_ratfunc,
    qpochhammer_denominator,
    rf_arith,
)

t = sp.Symbol("t")


def lp(d):
    return LaurentPoly(d)


def to_sympy(x):
    if isinstance(x, RatFunc):
        return to_sympy(x.num) / to_sympy(x.den)
    return sum(c * t**e for e, c in x.items())


T1 = lp({1: 1})
TM1 = lp({-1: 1})
DIFF = lp({1: 1, -1: -1})


def test_lp_examples():
    assert lp_arith(T1, TM1, "mul") == lp({0: 1})
    assert lp_arith(DIFF, lp({1: 1, -1: 1}), "mul") == lp({2: 1, -2: -1})
    assert lp_arith(DIFF, lp({-1: 1, 1: -1}), "add").coeffs == {}


def test_zero_coefficients_dropped():
    assert lp({3: 0, 1: 2}).coeffs == {1: 2}
    assert (DIFF - DIFF).is_zero()


def test_rf_examples():
    inv = RatFunc(1, DIFF)
    assert rf_arith(inv, RatFunc(DIFF), "mul") == ONE
    assert rf_arith(inv, inv, "add") == RatFunc(2, DIFF)
    assert rf_arith(RatFunc(1, DIFF * DIFF), inv, "div") == inv


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(DivisionByZero):
        RatFunc(1, 0)


def test_canonical_form():
    r = RatFunc(lp({3: -2, 1: 2}), lp({2: -4, 0: 4}))
    # (2t - 2t^3) / (4 - 4t^2) = t/2
    assert r.num == lp({1: 1}) and r.den == lp({0: 2})
    assert r.den.min_exp() == 0 and r.den.leading() > 0


def test_qpochhammer_examples():
    assert qpochhammer_denominator(0) == lp({0: 1})
    assert qpochhammer_denominator(1) == DIFF
    assert qpochhammer_denominator(2) == lp({3: 1, 1: -1, -1: -1, -3: 1})
    assert qpochhammer_denominator(2) == DIFF * lp({2: 1, -2: -1})


@pytest.mark.parametrize("j", range(1, 13))
def test_qpochhammer_divisibility(j):
    q = RatFunc(qpochhammer_denominator(j), qpochhammer_denominator(j - 1))
    assert q.den.is_one()
    assert q.num == lp({j: 1, -j: -1})


small_lp = st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=4).map(LaurentPoly)
nonzero_lp = small_lp.filter(lambda p: not p.is_zero())
small_rf = st.builds(RatFunc, small_lp, nonzero_lp)


@given(small_lp, small_lp, small_lp)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(small_lp, small_lp)
def test_lp_matches_sympy(a, b):
    assert sp.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    assert sp.expand(to_sympy(a + b) - to_sympy(a) - to_sympy(b)) == 0


@settings(max_examples=150)
@given(small_rf, small_rf)
def test_structural_equality_iff_cross_multiplication(a, b):
    cross = a.num * b.den == b.num * a.den
    assert (a == b) == cross


@settings(max_examples=100)
@given(small_lp, nonzero_lp, st.integers(-3, 3))
def test_scaling_gives_same_canonical_form(n, d, k):
    f = lp({k: 1, k + 2: 3})
    assert RatFunc(n, d) == RatFunc(n * f, d * f)


@settings(max_examples=100)
@given(small_rf, small_rf)
def test_rf_matches_sympy(a, b):
    assert sp.simplify(to_sympy(a + b) - (to_sympy(a) + to_sympy(b))) == 0
    assert sp.simplify(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0
    if not b.is_zero():
        assert sp.simplify(to_sympy(a / b) - to_sympy(a) / to_sympy(b)) == 0


@given(small_rf)
def test_field_inverse(a):
    if not a.is_zero():
        assert a * (ONE / a) == ONE
        assert a - a == ZERO


def test_format_examples():
    assert format_laurent(DIFF) == "q^{1/2} - q^{-1/2}"
    assert format_laurent(lp({4: -2, 0: 1})) == "-2q^{2} + 1"
    assert format_laurent(LaurentPoly()) == "0"
    assert format_ratfunc(RatFunc(1, DIFF)) == "(q^{1/2})/(q^{1} - 1)"


@given(small_lp)
def test_laurent_round_trip(p):
    assert parse_laurent(format_laurent(p)) == p


@given(small_rf)
def test_ratfunc_round_trip(r):
    assert parse_ratfunc(format_ratfunc(r)) == r


@pytest.mark.parametrize("bad", ["", "q^{1/2", "2 3", "q^{2/2}", "x"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_laurent(bad)


def test_values_are_hashable():
    assert len({RatFunc(2, 4), RatFunc(1, 2)}) == 1
