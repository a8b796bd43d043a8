from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from slqspin.scalars import (
    C1,
    C2,
    GAMMA,
    I,
    ONE,
    Q,
    QHAT,
    REAL,
    S,
    UNIT,
    ZERO,
    ConjRegime,
    ScalarQ,
    parse_scalar,
    qint,
    qpow,
    render,
    spow,
)

# --- random value strategy -------------------------------------------------

_coeff = st.tuples(st.integers(-5, 5), st.integers(-2, 2))
_mono = st.tuples(
    st.integers(-3, 3), st.integers(0, 2), st.integers(-1, 1), st.integers(-1, 1)
)


def _poly_of(pairs):
    out = {}
    for m, (x, y) in pairs:
        if x or y:
            out[m] = (x, y, 1)
    return out


_poly = st.lists(st.tuples(_mono, _coeff), min_size=0, max_size=4).map(_poly_of)
_poly_nonzero = _poly.filter(lambda p: bool(p))

# denominators univariate in s so cancellation stays in its complete regime
_smono = st.tuples(st.integers(0, 4), st.just(0), st.just(0), st.just(0))
_sden = (
    st.lists(st.tuples(_smono, _coeff), min_size=1, max_size=3)
    .map(_poly_of)
    .filter(lambda p: bool(p))
)


@st.composite
def scalars(draw):
    return ScalarQ(draw(_poly), draw(_sden))


@st.composite
def scalars_nonzero(draw):
    return ScalarQ(draw(_poly_nonzero), draw(_sden))


# --- worked examples -------------------------------------------------------


def test_polynomial_cancellation():
    assert (Q ** 2 - 1) / (Q - 1) == Q + 1


def test_q_integer_two():
    assert qint(2) == Q + Q ** -1
    assert qint(2) == S ** 2 + S ** -2


def test_qhat_times_two_bracket():
    assert QHAT * qint(2) == Q ** 2 - Q ** -2


def test_qint_signs():
    assert qint(0) == ZERO
    assert qint(-3) == -qint(3)
    assert qint(3) == Q ** 2 + 1 + Q ** -2


def test_conj_regimes_on_generators():
    assert S.conj(REAL) == S
    assert S.conj(UNIT) == S ** -1
    assert (I * Q).conj(REAL) == -I * Q
    assert QHAT.conj(UNIT) == -QHAT


def test_conj_undeclared_gamma_twist_needs_unit():
    with pytest.raises(ValueError):
        ConjRegime("REAL", ("twist", 6, 1))


def test_eval_examples():
    assert qint(2).eval_numeric(2) == Fraction(5, 2)
    assert QHAT.eval_numeric(1) == 0
    assert (-(Q ** -1) / QHAT ** 2).eval_numeric(2) == Fraction(-2, 9)


def test_eval_pole_is_reported():
    with pytest.raises(ZeroDivisionError):
        (ONE / QHAT).eval_numeric(1)


def test_eval_with_params_and_sqrt():
    v = (GAMMA * S).eval_numeric(4, {"gamma": Fraction(3)})
    assert v == ScalarQ.from_int(3).eval_numeric(4) * S.eval_numeric(4)
    assert S.eval_numeric(4).as_rational() is None  # sqrt(q) kept symbolic
    assert (S * S).eval_numeric(4).as_rational() == 4


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_parse_render_roundtrip_samples():
    for text in [
        "q^(3/2) * [2] - qhat / (1 + q)",
        "gamma*gamma - i*c1/2 + [3]*c2",
        "-q^(-7/2) + 1/qhat",
        "(1 - q^(2))/(1 + q)",
    ]:
        x = parse_scalar(text)
        assert parse_scalar(render(x)) == x


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse_scalar("q +* 2")
    with pytest.raises(ValueError):
        parse_scalar("foo")


# --- field axioms (randomized) --------------------------------------------


@settings(max_examples=400, deadline=None)
@given(scalars(), scalars(), scalars())
def test_field_axioms_additive_multiplicative(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a
    assert a * ONE == a
    assert a - a == ZERO


@settings(max_examples=400, deadline=None)
@given(scalars(), scalars_nonzero())
def test_field_axioms_inverses(a, b):
    assert (a / b) * b == a
    assert b / b == ONE


@settings(max_examples=300, deadline=None)
@given(scalars())
def test_canonicalization_idempotent(a):
    again = ScalarQ(dict(a.num), dict(a.den))
    assert again.num == a.num and again.den == a.den


@settings(max_examples=300, deadline=None)
@given(scalars(), scalars())
def test_conj_is_field_antiautomorphism(a, b):
    for regime in (
        REAL,
        UNIT,
        ConjRegime("REAL", "minus"),
        ConjRegime("UNIT", ("twist", 6, -1)),
        ConjRegime("UNIT", ("twist", 12, 1)),
    ):
        ca, cb = a.conj(regime), b.conj(regime)
        assert ca.conj(regime) == a
        assert (a * b).conj(regime) == ca * cb
        assert (a + b).conj(regime) == ca + cb


def test_conj_fixes_c_parameters():
    for regime in (REAL, UNIT, ConjRegime("UNIT", ("twist", 6, 1))):
        assert C1.conj(regime) == C1
        assert C2.conj(regime) == C2


def test_conj_gamma_rules():
    assert GAMMA.conj(ConjRegime("REAL", "self")) == GAMMA
    assert GAMMA.conj(ConjRegime("REAL", "minus")) == -GAMMA
    tw = ConjRegime("UNIT", ("twist", 6, -1))
    assert GAMMA.conj(tw) == -spow(6) * GAMMA


def test_denominator_stays_reduced():
    x = (S ** 2 - 1) / ((S - 1) * (S + 1) * (S ** 2 + 1))
    assert x == ONE / (S ** 2 + 1)
    assert x.num == {(0, 0, 0, 0): (1, 0, 1)}
    assert set(x.den) == {(2, 0, 0, 0), (0, 0, 0, 0)}


def test_c_monomial_denominators_fold_into_numerator():
    x = ONE / (C1 * 2)
    assert x.den == {(0, 0, 0, 0): (1, 0, 1)}
    assert x * (C1 * 2) == ONE
