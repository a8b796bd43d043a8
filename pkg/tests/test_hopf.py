import time
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from slqspin.hopf import (
    A,
    B,
    C,
    D,
    UNIT_ELEM,
    AlgElem,
    STAR_STRUCTURES,
    antipode,
    antipode_sq,
    beta,
    check_confluence,
    coproduct,
    coproduct_mono,
    corep_defect,
    corep_matrix,
    counit,
    haar,
    normal_form,
    rho,
    star,
)
from slqspin.scalars import ONE, ZERO, ScalarQ, qint, qpow, spow
from slqspin.tensors import rhat

U = [[A, B], [C, D]]

_key = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2))
_elem = st.lists(
    st.tuples(_key, st.integers(-4, 4)), min_size=0, max_size=3
).map(lambda ps: AlgElem({k: ScalarQ.from_int(c) for k, c in ps if c}))
_mono = _key.map(lambda k: AlgElem({k: ONE}))


# --- algebra ----------------------------------------------------------------


def test_pair_relations():
    assert B * A == qpow(-1) * (A * B)
    assert C * A == qpow(-1) * (A * C)
    assert C * B == B * C
    assert D * B == qpow(-1) * (B * D)
    assert D * C == qpow(-1) * (C * D)
    assert A * D == UNIT_ELEM + qpow(1) * B * C
    assert D * A == UNIT_ELEM + qpow(-1) * B * C


def test_determinant():
    assert A * D - qpow(1) * B * C == UNIT_ELEM


def test_normal_form_words():
    assert normal_form("ba") == qpow(-1) * (A * B)
    assert normal_form("ad") == UNIT_ELEM + qpow(1) * B * C
    assert normal_form("da") == UNIT_ELEM + qpow(-1) * B * C
    assert normal_form("abd") == qpow(1) * B + qpow(2) * B * B * C


def test_rtt_relations():
    r = rhat()
    for i in (1, 2):
        for j in (1, 2):
            for m in (1, 2):
                for n in (1, 2):
                    lhs = AlgElem.zero()
                    rhs = AlgElem.zero()
                    for k in (1, 2):
                        for l in (1, 2):
                            cl = r.entry((i, j), (k, l))
                            if not cl.is_zero():
                                lhs = lhs + cl * (U[k - 1][m - 1] * U[l - 1][n - 1])
                            cr = r.entry((k, l), (m, n))
                            if not cr.is_zero():
                                rhs = rhs + (U[i - 1][k - 1] * U[j - 1][l - 1]) * cr
                    assert lhs == rhs


def test_confluence():
    assert check_confluence()


@settings(max_examples=60, deadline=None)
@given(_elem, _elem, _elem)
def test_associativity(x, y, z):
    assert (x * y) * z == x * (y * z)


@settings(max_examples=60, deadline=None)
@given(_mono, _mono)
def test_grading_multiplicative(x, y):
    gx, gy = x.grading(), y.grading()
    p = x * y
    for part_deg in (p.homogeneous_parts() or {gx + gy: p}):
        assert part_deg == gx + gy


def test_no_mixed_ad_monomials():
    for x in (A * D, D * A, A * A * D, A * B * D * C):
        for (k, l, m) in x.terms:
            assert True  # keys carry a single signed power, mixing is impossible
        assert all(isinstance(k, int) for key in x.terms for k in key)


# --- coalgebra --------------------------------------------------------------


def _tensor_prune(t):
    return {k: v for k, v in t.items() if not v.is_zero()}


def test_coproduct_generators():
    assert coproduct(A) == {((1, 0, 0), (1, 0, 0)): ONE, ((0, 1, 0), (0, 0, 1)): ONE}
    assert coproduct(UNIT_ELEM) == {((0, 0, 0), (0, 0, 0)): ONE}


@settings(max_examples=40, deadline=None)
@given(_mono)
def test_coassociativity(x):
    cop = coproduct(x)
    lhs: dict = {}
    rhs: dict = {}
    for (k1, k2), c in cop.items():
        for (k11, k12), c2 in coproduct_mono(k1).items():
            key = (k11, k12, k2)
            lhs[key] = lhs.get(key, ZERO) + c * c2
        for (k21, k22), c2 in coproduct_mono(k2).items():
            key = (k1, k21, k22)
            rhs[key] = rhs.get(key, ZERO) + c * c2
    assert _tensor_prune(lhs) == _tensor_prune(rhs)


@settings(max_examples=40, deadline=None)
@given(_mono)
def test_counit_and_antipode_axioms(x):
    cop = coproduct(x)
    left = AlgElem.zero()
    right = AlgElem.zero()
    s_left = AlgElem.zero()
    s_right = AlgElem.zero()
    for (k1, k2), c in cop.items():
        left = left + counit(AlgElem({k1: c})) * AlgElem({k2: ONE})
        right = right + AlgElem({k1: c}) * counit(AlgElem({k2: ONE}))
        s_left = s_left + c * (antipode(AlgElem({k1: ONE})) * AlgElem({k2: ONE}))
        s_right = s_right + c * (AlgElem({k1: ONE}) * antipode(AlgElem({k2: ONE})))
    assert left == x
    assert right == x
    assert s_left == AlgElem.from_scalar(counit(x))
    assert s_right == AlgElem.from_scalar(counit(x))


def test_coproduct_grading_additive():
    for x in (A * B, C * D * D, B * C):
        g = x.grading()
        for (k1, k2) in coproduct(x):
            assert (k1[2] - k1[1]) + (k2[2] - k2[1]) == g


def test_antipode_images():
    assert antipode(A) == D
    assert antipode(D) == A
    assert antipode(B) == -qpow(-1) * B
    assert antipode(C) == -qpow(1) * C
    assert antipode_sq(B) == qpow(-2) * B
    assert antipode_sq(C) == qpow(2) * C


@settings(max_examples=30, deadline=None)
@given(_elem)
def test_antipode_squared_consistent(x):
    assert antipode_sq(x) == antipode(antipode(x))


# --- star structures --------------------------------------------------------


def test_star_images():
    dag = STAR_STRUCTURES["dagger"]
    assert star(A, dag) == D
    assert star(B, dag) == -qpow(1) * C
    assert star(C, dag) == -qpow(-1) * B
    assert star(D, dag) == A
    sta = STAR_STRUCTURES["star"]
    assert star(B, sta) == qpow(1) * C
    assert star(C, sta) == qpow(-1) * B
    sha = STAR_STRUCTURES["sharp"]
    for g in (A, B, C, D):
        assert star(g, sha) == g


@pytest.mark.parametrize("tag", ["dagger", "star", "sharp"])
def test_star_involutive_antihomomorphism(tag):
    s = STAR_STRUCTURES[tag]
    samples = [A, B, C, D, A * B, C * D, B * C, D * D * C, A * B * C]
    for x in samples:
        assert star(star(x, s), s) == x
    for x, y in [(A, B), (C, D), (A * B, C), (D, A)]:
        assert star(x * y, s) == star(y, s) * star(x, s)


@pytest.mark.parametrize("tag", ["dagger", "star", "sharp"])
def test_star_coproduct_compatible(tag):
    s = STAR_STRUCTURES[tag]
    for g in (A, B, C, D):
        lhs = coproduct(star(g, s))
        rhs: dict = {}
        for (k1, k2), c in coproduct(g).items():
            sx = star(AlgElem({k1: ONE}), s)
            sy = star(AlgElem({k2: ONE}), s)
            for kk1, c1 in sx.terms.items():
                for kk2, c2 in sy.terms.items():
                    key = (kk1, kk2)
                    rhs[key] = rhs.get(key, ZERO) + c.conj(s.regime) * c1 * c2
        assert lhs == _tensor_prune(rhs)


# --- modular automorphism ---------------------------------------------------


def test_rho_images():
    assert rho(A) == qpow(-2) * A
    assert rho(B) == B
    assert rho(C) == C
    assert rho(D) == qpow(2) * D


def test_rho_multiplicative():
    for x, y in [(A, B), (C, D), (A * B, C * D)]:
        assert rho(x * y) == rho(x) * rho(y)


@pytest.mark.parametrize("tag", ["dagger", "star", "sharp"])
def test_beta_involution(tag):
    s = STAR_STRUCTURES[tag]
    samples = [A, B, C, D, A * B, B * C, D * C]
    for x in samples:
        assert beta(beta(x, s), s) == x
    for x, y in [(A, B), (C, D * C)]:
        assert beta(x * y, s) == beta(y, s) * beta(x, s)


def test_haar_modular_property():
    pairs = [(A, D), (B, C), (A * B, C * D), (B * C, B * C), (A, A)]
    for x, y in pairs:
        assert haar(x * y, cap=6) == haar(y * rho(x), cap=6)


# --- Haar functional --------------------------------------------------------


def test_haar_values():
    assert haar(UNIT_ELEM, cap=4) == ONE
    for g in (A, B, C, D):
        assert haar(g, cap=4).is_zero()
    assert haar(B * C, cap=4) == -ONE / qint(2)
    assert haar(A * D, cap=4) == qpow(-1) / qint(2)
    assert haar(D * A, cap=4) == qpow(1) / qint(2)
    assert haar(B * C * B * C, cap=4) == ONE / qint(3)
    assert haar(B * C * B * C * B * C, cap=6) == -ONE / qint(4)


def test_haar_invariance_both_sides():
    samples = [A, B * C, A * B, C * D, D * D, B * C * B * C]
    for x in samples:
        hx = haar(x, cap=6)
        left = AlgElem.zero()
        right = AlgElem.zero()
        for (k1, k2), c in coproduct(x).items():
            left = left + haar(AlgElem({k1: c}), cap=6) * AlgElem({k2: ONE})
            right = right + AlgElem({k1: c}) * haar(AlgElem({k2: ONE}), cap=6)
        assert left == AlgElem.from_scalar(hx)
        assert right == AlgElem.from_scalar(hx)


@pytest.mark.parametrize("tag", ["dagger", "star", "sharp"])
def test_haar_star_conjugation(tag):
    s = STAR_STRUCTURES[tag]
    for x in (A, B * C, A * D, B * C * B * C):
        assert haar(star(x, s), cap=6) == haar(x, cap=6).conj(s.regime)


def test_haar_cap_error():
    with pytest.raises(ValueError):
        haar(B * C * B * C, cap=2)


# --- corepresentations ------------------------------------------------------


def test_corep_matrices():
    t0 = time.time()
    for n in (0, Fraction(1, 2), 1, Fraction(3, 2)):
        w = corep_matrix(n)
        assert corep_defect(w) == []
        for i in range(w.size):
            for j in range(w.size):
                assert counit(w.entries[i][j]) == (ONE if i == j else ZERO)
    assert time.time() - t0 < 5.0


def test_corep_spin1_entries():
    w = corep_matrix(1)
    assert w.entries[0][0] == A * A
    assert w.entries[0][1] == A * B
    assert w.entries[1][1] == UNIT_ELEM + qint(2) * B * C
    assert w.entries[2][2] == D * D
    assert w.qp_parity == [[0, 1, 0], [1, 0, 1], [0, 1, 0]]


def test_corep_spin32_corners():
    w = corep_matrix(Fraction(3, 2))
    assert w.entries[0][0] == A * A * A
    assert w.entries[0][3] == B * B * B
    assert w.entries[3][0] == C * C * C
    assert w.entries[3][3] == D * D * D


def test_corep_entries_haar_orthogonal_to_unit():
    for n in (1, Fraction(3, 2)):
        w = corep_matrix(n)
        for row in w.entries:
            for entry in row:
                assert haar(entry, cap=4).is_zero()


def test_corep_cap():
    with pytest.raises(ValueError):
        corep_matrix(2)
