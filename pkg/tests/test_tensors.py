import time

import pytest

from slqspin.scalars import C1, ONE, Q, QHAT, ZERO, qint, qpow, spow
from slqspin.tensors import (
    TensorOp,
    antisymmetrizer,
    antisymmetrizer_dims,
    braiding_sigma,
    cap,
    cup,
    jones_wenzl,
    metric_g,
    rhat,
    rhat_inv,
    sigma_tilde,
    tl_generator,
)

I1 = TensorOp.identity(1)
I2 = TensorOp.identity(2)
I4 = TensorOp.identity(4)


# --- R-matrix and pairing identities ---------------------------------------


def test_rhat_entries():
    r = rhat()
    assert r.entry((1, 1), (1, 1)) == spow(1)
    assert r.entry((2, 2), (2, 2)) == spow(1)
    assert r.entry((1, 2), (2, 1)) == spow(-1)
    assert r.entry((2, 1), (1, 2)) == spow(-1)
    assert r.entry((1, 2), (1, 2)) == spow(-1) * QHAT
    assert len(r.data) == 5


def test_rhat_inverse():
    assert rhat().compose(rhat_inv()) == I2
    assert rhat_inv().compose(rhat()) == I2


def test_yang_baxter():
    r = rhat()
    r12, r23 = r.lift(0, 3), r.lift(1, 3)
    assert r12.compose(r23).compose(r12) == r23.compose(r12).compose(r23)


def test_snakes_are_identity():
    cu, ca = cup(), cap()
    assert ca.tensor(I1).compose(I1.tensor(cu)) == I1
    assert I1.tensor(ca).compose(cu.tensor(I1)) == I1


def test_full_contraction():
    assert cap().compose(cup()).entry((), ()) == -qint(2)


def test_rhat_decomposition():
    dec = I2.scale(spow(1)) + cup().compose(cap()).scale(spow(-1))
    assert dec == rhat()


def test_rhat_quadratic_relation():
    # eigenvalues q^(1/2) on the symmetric part and -q^(-3/2) on the cup line
    r = rhat()
    quad = (r - I2.scale(spow(1))).compose(r + I2.scale(spow(-3)))
    assert quad.is_zero()


# --- Temperley-Lieb and Jones-Wenzl ----------------------------------------


def test_tl_generator_square():
    for n, i in ((2, 0), (3, 0), (3, 1)):
        e = tl_generator(n, i)
        assert e.compose(e) == e.scale(-qint(2))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_jones_wenzl_defining_properties(n):
    p = jones_wenzl(n)
    assert p.compose(p) == p
    for i in range(n - 1):
        assert p.compose(tl_generator(n, i)).is_zero()
        assert tl_generator(n, i).compose(p).is_zero()
        assert rhat().lift(i, n).compose(p) == p.scale(spow(1))
        assert p.compose(rhat().lift(i, n)) == p.scale(spow(1))


def test_jones_wenzl_two():
    p = jones_wenzl(2)
    expect = I2 + cup().compose(cap()).scale(ONE / qint(2))
    assert p == expect


def test_jones_wenzl_cap():
    with pytest.raises(ValueError):
        jones_wenzl(5)


# --- braiding of the 1-form bimodule ---------------------------------------


def test_sigma_tilde_table():
    sig = braiding_sigma()
    assert sigma_tilde(2, 1) == sig
    assert sig.compose(sigma_tilde(3, 1)) == I4
    assert sigma_tilde(3, 1).compose(sig) == I4
    assert sigma_tilde(1, -1) == sigma_tilde(1, 1).scale(-1)


def test_sigma_weight_preserving():
    for (o, i) in braiding_sigma().data:
        assert sum(o) == sum(i)


def test_kernel_of_id_minus_sigma():
    d = I4 - braiding_sigma()
    assert d.rank() == 6
    ker = d.kernel_basis()
    assert len(ker) == 10
    for vec in ker:
        assert not d.apply(vec)


def test_clifford_compatibility_conditions():
    """Each of the 8 candidate braidings intertwines sigma and contracts to g."""
    sig = braiding_sigma()
    g = metric_g()
    g12 = g.tensor(I2)
    g23 = I2.tensor(g)
    s12, s23 = sig.lift(0, 6), sig.lift(2, 6)
    for i in (1, 2, 3, 4):
        for nu in (1, -1):
            st = sigma_tilde(i, nu)
            st12, st23 = st.lift(0, 6), st.lift(2, 6)
            assert s23.compose(st12).compose(st23) == st12.compose(st23).compose(s12)
            assert g23.compose(st12).compose(st23) == g12


def test_torsion_factorizations():
    sig = braiding_sigma()
    st1 = sigma_tilde(1, 1)
    assert (I4 - sig).compose(I4 + st1.scale(qpow(1))).is_zero()
    st2 = sigma_tilde(2, 1)
    both = (I4 - sig).compose(I4 + st2.scale(qpow(-2))).compose(I4 + st2.scale(qpow(2)))
    assert both.is_zero()
    assert not (I4 - sig).compose(I4 + st2.scale(qpow(-2))).is_zero()
    # no candidate feeds a torsion-free connection: (id - sigma)(id + st) != 0
    for i in (1, 2, 3, 4):
        for nu in (1, -1):
            assert not (I4 - sig).compose(I4 + sigma_tilde(i, nu)).is_zero()


# --- metric ----------------------------------------------------------------


def test_metric_entries():
    g = metric_g()
    expect = {
        (1, 1, 2, 2): -C1,
        (1, 2, 2, 1): C1,
        (2, 1, 1, 2): C1,
        (2, 2, 1, 1): -Q * Q * C1,
        (1, 2, 1, 2): QHAT * C1,
    }
    assert {i: v for (_, i), v in g.data.items()} == expect


def test_metric_sigma_invariance():
    g = metric_g()
    assert g.compose(braiding_sigma()) == g


def test_metric_inverse_braiding_compatibility():
    g = metric_g()
    g12 = g.tensor(I2)
    g23 = I2.tensor(g)
    for s in (braiding_sigma(), sigma_tilde(3, 1)):
        assert g12.compose(s.lift(2, 6)).compose(s.lift(0, 6)) == g23


# --- external algebra dimensions -------------------------------------------


def test_antisymmetrizer_dims():
    t0 = time.time()
    dims = antisymmetrizer_dims(4)
    assert dims == [1, 4, 6, 4, 1]
    assert sum(dims) == 16
    assert time.time() - t0 < 30.0


def test_antisymmetrizer_two():
    assert antisymmetrizer(2) == I4 - braiding_sigma()


def test_antisymmetrizer_braid_recursion():
    # A_3 = (id - sigma_12)(id x A_2-part): check via the left-coset expansion
    # A_3 = (id + s12 + s12 s23)(id - s23) with s = -sigma summed signs folded in
    sig = braiding_sigma()
    s12, s23 = sig.lift(0, 6), sig.lift(2, 6)
    i6 = TensorOp.identity(6)
    rebuilt = (
        i6 - s12 - s23
        + s12.compose(s23) + s23.compose(s12)
        - s12.compose(s23).compose(s12)
    )
    assert rebuilt == antisymmetrizer(3)


# --- exact linear algebra --------------------------------------------------


def test_rank_full_and_zero():
    assert I4.rank() == 16
    assert TensorOp(2, 2).rank() == 0
    assert braiding_sigma().rank() == 16


def test_kernel_members_annihilate():
    d = I4 - braiding_sigma()
    for vec in d.kernel_basis():
        image = d.apply(vec)
        assert image == {}


def test_lift_out_of_range():
    with pytest.raises(ValueError):
        rhat().lift(3, 4)
    with pytest.raises(ValueError):
        cap().lift(0, 4)
