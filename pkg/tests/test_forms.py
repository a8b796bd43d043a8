import itertools

import pytest
from hypothesis import given, settings, strategies as st

from slqspin.hopf import (
    A,
    B,
    C,
    D,
    U_MATRIX,
    UNIT_ELEM,
    AlgElem,
    antipode_sq,
    beta,
    counit,
    coproduct,
    star,
)
from slqspin.dualfunc import INDEX_PAIRS, b_matrix, calculus_sign, f_matrix, pair
from slqspin.forms import (
    FormElem,
    antipode_sq_form,
    beta_form,
    beta_matrix,
    commutator_differential,
    differential,
    right_coaction,
    star_form,
    theta_basis,
    theta_form,
    theta_star_table,
)
from slqspin.scalars import ONE, QHAT, ZERO, ScalarQ, qpow
from slqspin.tensors import braiding_sigma, rhat, rhat_inv

GENS = [A, B, C, D]
CALCULI = ["+", "-"]
TAGS = ["dagger", "star", "sharp"]

_key = st.tuples(st.integers(-2, 2), st.integers(0, 2), st.integers(0, 2))
_elem = st.lists(st.tuples(_key, st.integers(-3, 3)), min_size=0, max_size=3).map(
    lambda ps: AlgElem({k: ScalarQ.from_int(c) for k, c in ps if c})
)


# --- module structure -------------------------------------------------------


@pytest.mark.parametrize("calc", CALCULI)
def test_right_mul_unit_and_zero(calc):
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        assert th[ij] * UNIT_ELEM == th[ij]
        assert (th[ij] * AlgElem.zero()).is_zero()


def test_calculi_do_not_mix():
    with pytest.raises(ValueError):
        theta_basis("+")[(1, 1)] + theta_basis("-")[(1, 1)]


@settings(max_examples=40, deadline=None)
@given(_elem, _elem)
def test_right_mul_associative(x, y):
    for calc in CALCULI:
        w = theta_basis(calc)[(1, 2)]
        assert (w * x) * y == w * (x * y)


@pytest.mark.parametrize("calc", CALCULI)
def test_theta_generator_commutation(calc):
    # theta_ij u^k_l written back through the R-matrix and its inverse
    r, rinv = rhat(), rhat_inv()
    eps0 = calculus_sign(calc)
    th = theta_basis(calc)
    for i, j in INDEX_PAIRS:
        for k, l in INDEX_PAIRS:
            lhs = th[(i, j)] * U_MATRIX[k - 1][l - 1]
            rhs = FormElem.zero(calc)
            for m, rr, t, s in itertools.product((1, 2), repeat=4):
                c = r.entry((m, rr), (i, t)) * rinv.entry((t, s), (j, l))
                if c.is_zero():
                    continue
                rhs = rhs + FormElem(
                    {(rr, s): U_MATRIX[k - 1][m - 1].scale(c * eps0)}, calc
                )
            assert lhs == rhs


# --- differential -----------------------------------------------------------


@pytest.mark.parametrize("calc", CALCULI)
def test_differential_routes_agree(calc):
    for x in GENS + [A * B, B * C, A * D, D * D, A * A * C]:
        assert differential(x, calc) == commutator_differential(x, calc)
    assert differential(UNIT_ELEM, calc).is_zero()


@settings(max_examples=30, deadline=None)
@given(_elem, _elem)
def test_leibniz(x, y):
    for calc in CALCULI:
        lhs = differential(x * y, calc)
        rhs = differential(x, calc) * y + x * differential(y, calc)
        assert lhs == rhs


def test_differential_of_a_plus():
    got = differential(A, "+").coeffs[(1, 2)]
    assert got == A.scale((qpow(1) - ONE) / QHAT)


@pytest.mark.parametrize("calc", CALCULI)
def test_theta_squares_to_scalar_action(calc):
    # theta x - x theta kills the unit but no generator
    th = theta_form(calc)
    for x in GENS:
        assert not (th * x - x * th).is_zero()


# --- involutions ------------------------------------------------------------


def test_theta_star_tables():
    for calc in CALCULI:
        t = theta_star_table("dagger", calc)
        assert t[(1, 1)] == [((2, 2), qpow(-1))]
        assert t[(1, 2)] == [((1, 2), -ONE)]
        assert t[(2, 1)] == [((2, 1), -ONE)]
        assert t[(2, 2)] == [((1, 1), qpow(1))]
        t = theta_star_table("star", calc)
        assert t[(1, 1)] == [((2, 2), -qpow(-1))]
        assert t[(2, 2)] == [((1, 1), -qpow(1))]
        t = theta_star_table("sharp", calc)
        assert t[(1, 1)] == [((1, 1), qpow(-1))]
        assert t[(1, 2)] == [((1, 2), ONE), ((2, 1), -QHAT)]
        assert t[(2, 1)] == [((2, 1), ONE)]
        assert t[(2, 2)] == [((2, 2), qpow(-1))]


@pytest.mark.parametrize("calc", CALCULI)
@pytest.mark.parametrize("tag", TAGS)
def test_star_commutes_with_differential(calc, tag):
    for x in GENS + [A * B, B * C]:
        assert star_form(differential(x, calc), tag) == differential(
            star(x, tag), calc
        )


@pytest.mark.parametrize("calc", CALCULI)
@pytest.mark.parametrize("tag", TAGS)
def test_star_antimodule_and_involutive(calc, tag):
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        for x in GENS:
            rho = x * th[ij]
            assert star_form(rho, tag) == star_form(th[ij], tag) * star(x, tag)
            assert star_form(star_form(rho, tag), tag) == rho
            moved = th[ij] * x
            assert star_form(moved, tag) == star(x, tag) * star_form(th[ij], tag)


# --- beta -------------------------------------------------------------------


def test_beta_matrix_matches_b_matrix_for_real_structures():
    for calc in CALCULI:
        for tag in ("dagger", "star"):
            assert beta_matrix(tag, calc) == b_matrix(tag, calc)


def test_beta_matrix_sharp():
    got = beta_matrix("sharp", "+")
    want = [
        [-qpow(-1), ZERO, ZERO, ZERO],
        [ZERO, -ONE, ZERO, ZERO],
        [ZERO, -QHAT, -ONE, ZERO],
        [ZERO, ZERO, ZERO, -qpow(3)],
    ]
    assert got == want


@pytest.mark.parametrize("calc", CALCULI)
@pytest.mark.parametrize("tag", TAGS)
def test_beta_anticommutes_with_differential(calc, tag):
    for x in GENS:
        assert beta_form(differential(x, calc), tag) == -differential(
            beta(x, tag), calc
        )


@pytest.mark.parametrize("calc", CALCULI)
@pytest.mark.parametrize("tag", TAGS)
def test_beta_antimultiplicative_involutive(calc, tag):
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        for x in GENS[:2]:
            for y in GENS[2:]:
                rho = (x * th[ij]) * y
                want = (beta(y, tag) * beta_form(th[ij], tag)) * beta(x, tag)
                assert beta_form(rho, tag) == want
                assert beta_form(beta_form(rho, tag), tag) == rho


# --- square of the antipode -------------------------------------------------


@pytest.mark.parametrize("calc", CALCULI)
def test_antipode_sq_commutes_with_differential(calc):
    for x in GENS + [A * B, B * C]:
        assert antipode_sq_form(differential(x, calc)) == differential(
            antipode_sq(x), calc
        )
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        for x in GENS:
            assert antipode_sq_form(x * th[ij]) == antipode_sq(x) * antipode_sq_form(
                th[ij]
            )


# --- right coaction ---------------------------------------------------------


def _apply_counit(coact, calc):
    out = FormElem.zero(calc)
    for kl, tens in coact.items():
        coeff = AlgElem.zero()
        for (k1, k2), c in tens.items():
            coeff = coeff + AlgElem({k1: c * counit(AlgElem({k2: ONE}))})
        out = out + FormElem({kl: coeff}, calc)
    return out


def _coact_right_mul(coact, x, calc):
    th = theta_basis(calc)
    out = {}
    for kl, tens in coact.items():
        for (k1, k2), c in tens.items():
            for (x1, x2), cx in coproduct(x).items():
                left = (AlgElem({k1: c * cx}) * th[kl]) * AlgElem({x1: ONE})
                right = AlgElem({k2: ONE}) * AlgElem({x2: ONE})
                for mn, acoef in left.coeffs.items():
                    slot = out.setdefault(mn, {})
                    for ka, ca in acoef.terms.items():
                        for kb, cb in right.terms.items():
                            cur = slot.get((ka, kb))
                            new = ca * cb if cur is None else cur + ca * cb
                            if new.is_zero():
                                slot.pop((ka, kb), None)
                            else:
                                slot[(ka, kb)] = new
    return {mn: t for mn, t in out.items() if t}


@pytest.mark.parametrize("calc", CALCULI)
def test_coaction_counit_property(calc):
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        for x in GENS:
            rho = x * th[ij]
            assert _apply_counit(right_coaction(rho), calc) == rho


@pytest.mark.parametrize("calc", CALCULI)
def test_theta_right_invariant(calc):
    coact = right_coaction(theta_form(calc))
    want = {
        kl: {(k, (0, 0, 0)): c for k, c in coeff.terms.items()}
        for kl, coeff in theta_form(calc).coeffs.items()
    }
    assert coact == want


@pytest.mark.parametrize("calc", CALCULI)
def test_coaction_respects_right_multiplication(calc):
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        for x in GENS:
            lhs = right_coaction(th[ij] * x)
            rhs = _coact_right_mul(right_coaction(th[ij]), x, calc)
            assert lhs == rhs


# --- braiding ---------------------------------------------------------------


@pytest.mark.parametrize("calc", CALCULI)
def test_braiding_from_structure_functionals(calc):
    sigma = braiding_sigma()
    fm = f_matrix(calc)
    for i, j, k, l in itertools.product((1, 2), repeat=4):
        for m, n, r, s in itertools.product((1, 2), repeat=4):
            val = pair(
                fm[((m, n), (k, l))],
                U_MATRIX[i - 1][r - 1] * U_MATRIX[j - 1][s - 1],
            )
            assert val == sigma.entry((i, j, k, l), (m, n, r, s))
