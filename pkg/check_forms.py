import itertools
import time

from slqspin.scalars import ONE, QHAT, ZERO, qpow, spow
from slqspin.hopf import (
    A, B, C, D, U_MATRIX, UNIT_ELEM, AlgElem, STAR_STRUCTURES,
    antipode_sq, beta, coproduct, star,
)
from slqspin.dualfunc import INDEX_PAIRS, calculus_sign, f_matrix, convolve_right
from slqspin.forms import (
    FormElem, antipode_sq_form, beta_form, commutator_differential,
    differential, right_coaction, star_form, theta_basis, theta_form,
)
from slqspin.tensors import braiding_sigma, rhat, rhat_inv

t0 = time.time()
GENS = [A, B, C, D]
SAMPLES = [A, B, C, D, A * B, B * C, A * D, D * D, A * A * C, B * D * D]

# 1. two routes to the differential
for calc in ("+", "-"):
    for x in SAMPLES:
        assert differential(x, calc) == commutator_differential(x, calc), (calc, x)
    assert differential(UNIT_ELEM, calc).is_zero()
print("d: tangent route == commutator route", time.time() - t0)

# 2. Leibniz
for calc in ("+", "-"):
    for x in GENS:
        for y in GENS:
            lhs = differential(x * y, calc)
            rhs = differential(x, calc) * y + x * differential(y, calc)
            assert lhs == rhs, (calc, x, y)
print("Leibniz", time.time() - t0)

# 3. d(u^1_1) coefficient of theta_12 in the plus calculus
want = A.scale((qpow(1) - ONE) / QHAT)
assert differential(A, "+").coeffs[(1, 2)] == want
print("d(a) theta_12 coefficient", time.time() - t0)

# 4. commutation theta_ij u^k_l = eps0 Rhat^mr_it Rhatinv^ts_jl u^k_m theta_rs
r = rhat()
rinv = rhat_inv()
for calc in ("+", "-"):
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
                coef = U_MATRIX[k - 1][m - 1].scale(c * eps0)
                rhs = rhs + FormElem({(rr, s): coef}, calc)
            assert lhs == rhs, (calc, (i, j), (k, l))
print("theta/generator commutation", time.time() - t0)

# 5. stars
for calc in ("+", "-"):
    for tag in STAR_STRUCTURES:
        for x in GENS + [A * B, B * C]:
            lhs = star_form(differential(x, calc), tag)
            rhs = differential(star(x, tag), calc)
            assert lhs == rhs, (calc, tag, x)
        th = theta_basis(calc)
        for ij in INDEX_PAIRS:
            for x in GENS:
                rho = x * th[ij]
                assert star_form(rho, tag) == star_form(th[ij], tag) * star(x, tag)
                assert star_form(star_form(rho, tag), tag) == rho, (calc, tag, ij, x)
print("star: d-compatible, (a rho)* = rho* a*, involutive", time.time() - t0)

# 6. beta
for calc in ("+", "-"):
    for tag in STAR_STRUCTURES:
        for x in GENS:
            assert beta_form(differential(x, calc), tag) == -differential(beta(x, tag), calc), (calc, tag, x)
        th = theta_basis(calc)
        for ij in INDEX_PAIRS:
            for x in GENS[:2]:
                for y in GENS[2:]:
                    rho = (x * th[ij]) * y
                    want_b = (beta(y, tag) * beta_form(th[ij], tag)) * beta(x, tag)
                    assert beta_form(rho, tag) == want_b, (calc, tag, ij, x, y)
                    assert beta_form(beta_form(rho, tag), tag) == rho
print("beta: anti-commutes with d, antimultiplicative, involutive", time.time() - t0)

# 7. S^2
for calc in ("+", "-"):
    for x in SAMPLES[:6]:
        assert antipode_sq_form(differential(x, calc)) == differential(antipode_sq(x), calc), (calc, x)
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        for x in GENS:
            assert antipode_sq_form(x * th[ij]) == antipode_sq(x) * antipode_sq_form(th[ij])
print("S^2 commutes with d", time.time() - t0)


# 8. right coaction helpers
def coact_counit(coact, calc):
    from slqspin.hopf import counit
    out = FormElem.zero(calc)
    for kl, tens in coact.items():
        coef = AlgElem.zero()
        for (k1, k2), c in tens.items():
            coef = coef + AlgElem({k1: c * counit(AlgElem({k2: ONE}))})
        out = out + FormElem({kl: coef}, calc)
    return out


def coact_right_mul(coact, x, calc):
    """(sum a theta_kl (x) b) Delta(x) in Gamma (x) A."""
    out = {}
    th = theta_basis(calc)
    for kl, tens in coact.items():
        for (k1, k2), c in tens.items():
            for (x1, x2), cx in coproduct(x).items():
                left = (AlgElem({k1: c * cx}) * th[kl]) * AlgElem({x1: ONE})
                right = AlgElem({k2: ONE}) * AlgElem({x2: ONE})
                for mn, acoef in left.coeffs.items():
                    slot = out.setdefault(mn, {})
                    for ka, ca in acoef.terms.items():
                        for kb, cb in right.terms.items():
                            key = (ka, kb)
                            cur = slot.get(key)
                            new = ca * cb if cur is None else cur + ca * cb
                            if new.is_zero():
                                slot.pop(key, None)
                            else:
                                slot[key] = new
    return {mn: t for mn, t in out.items() if t}


for calc in ("+", "-"):
    th = theta_basis(calc)
    for ij in INDEX_PAIRS:
        for x in GENS:
            rho = x * th[ij]
            assert coact_counit(right_coaction(rho), calc) == rho, (calc, ij, x)
    # theta is right invariant
    coact = right_coaction(theta_form(calc))
    want = {}
    for kl, coeff in theta_form(calc).coeffs.items():
        want[kl] = {(k, (0, 0, 0)): c for k, c in coeff.terms.items()}
    assert coact == want, calc
    # coaction is compatible with right multiplication
    for ij in INDEX_PAIRS:
        for x in GENS:
            lhs = right_coaction(th[ij] * x)
            rhs = coact_right_mul(right_coaction(th[ij]), x, calc)
            assert lhs == rhs, (calc, ij, x)
print("right coaction: counit, theta invariant, right-module covariant", time.time() - t0)

# 9. braiding entries from the structure functionals
from slqspin.dualfunc import pair

sigma = braiding_sigma()
for calc in ("+", "-"):
    fm = f_matrix(calc)
    for i, j, k, l in itertools.product((1, 2), repeat=4):
        for m, n, rr, s in itertools.product((1, 2), repeat=4):
            val = pair(fm[((m, n), (k, l))], U_MATRIX[i - 1][rr - 1] * U_MATRIX[j - 1][s - 1])
            assert val == sigma.entry((i, j, k, l), (m, n, rr, s)), (calc, (i, j, k, l), (m, n, rr, s))
print("braiding matches the structure functionals", time.time() - t0)
print("ALL FORMS CHECKS PASS", time.time() - t0)
