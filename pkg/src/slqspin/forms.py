"""First-order differential calculus on the quantum SL(2) coordinate ring.

Both four-dimensional bicovariant calculi are supported.  An element is a
sum a_ij theta_ij with left coefficients from the coordinate ring and the
left-invariant basis one-forms theta_11, theta_12, theta_21, theta_22.
Right multiplication moves coefficients through theta with the structure
functionals of the chosen calculus, and the differential is

    d(x) = x_(1) X_ij(x_(2)) theta_ij = theta x - x theta

for the biinvariant element theta = (theta_12 - q theta_21)/qhat.
"""

from .scalars import ONE, QHAT, ScalarQ, qpow
from .hopf import (
    AlgElem,
    U_MATRIX,
    _coerce_alg,
    antipode_sq,
    beta,
    coproduct_mono,
    star,
)
from .dualfunc import (
    INDEX_PAIRS,
    calculus_sign,
    convolve_right,
    f_matrix,
    star_dual_pairing,
    tangent_basis,
    tangent_coordinates,
)
from .dualfunc import _DUAL_STAR, antipode_sq_dual


def _calc_tag(calculus) -> str:
    return "+" if calculus_sign(calculus) > 0 else "-"


class FormElem:
    """A one-form: map (i, j) -> coordinate-ring coefficient of theta_ij."""

    __slots__ = ("coeffs", "calculus")

    def __init__(self, coeffs: dict | None = None, calculus="+"):
        self.calculus = _calc_tag(calculus)
        self.coeffs = {}
        if coeffs:
            for ij, val in coeffs.items():
                if not val.is_zero():
                    self.coeffs[ij] = val

    @staticmethod
    def zero(calculus="+") -> "FormElem":
        return FormElem(None, calculus)

    def _check(self, other: "FormElem"):
        if self.calculus != other.calculus:
            raise ValueError("cannot mix one-forms of the two calculi")

    def __add__(self, other):
        if not isinstance(other, FormElem):
            return NotImplemented
        self._check(other)
        coeffs = dict(self.coeffs)
        for ij, val in other.coeffs.items():
            cur = coeffs.get(ij)
            new = val if cur is None else cur + val
            if new.is_zero():
                coeffs.pop(ij, None)
            else:
                coeffs[ij] = new
        out = FormElem(None, self.calculus)
        out.coeffs = coeffs
        return out

    def __sub__(self, other):
        if not isinstance(other, FormElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = FormElem(None, self.calculus)
        out.coeffs = {ij: -v for ij, v in self.coeffs.items()}
        return out

    def __mul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        fm = f_matrix(self.calculus)
        out = FormElem.zero(self.calculus)
        for ij, a in self.coeffs.items():
            for kl in INDEX_PAIRS:
                moved = convolve_right(fm[(ij, kl)], x)
                if moved.is_zero():
                    continue
                out = out + FormElem({kl: a * moved}, self.calculus)
        return out

    def __rmul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        coeffs = {}
        for ij, v in self.coeffs.items():
            prod = x * v
            if not prod.is_zero():
                coeffs[ij] = prod
        out = FormElem(None, self.calculus)
        out.coeffs = coeffs
        return out

    def scale(self, c: ScalarQ) -> "FormElem":
        out = FormElem(None, self.calculus)
        if not c.is_zero():
            out.coeffs = {ij: v.scale(c) for ij, v in self.coeffs.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, FormElem):
            return NotImplemented
        if self.calculus != other.calculus:
            return False
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        return all(other.coeffs[ij] == v for ij, v in self.coeffs.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for ij in INDEX_PAIRS:
            if ij in self.coeffs:
                bits.append("(%r)*th%d%d" % (self.coeffs[ij], ij[0], ij[1]))
        return " + ".join(bits)


def theta_basis(calculus="+") -> dict:
    return {
        ij: FormElem({ij: AlgElem.one()}, calculus) for ij in INDEX_PAIRS
    }


def theta_form(calculus="+") -> FormElem:
    """The biinvariant one-form (theta_12 - q theta_21)/qhat."""
    return FormElem(
        {
            (1, 2): AlgElem.from_scalar(ONE / QHAT),
            (2, 1): AlgElem.from_scalar(-qpow(1) / QHAT),
        },
        calculus,
    )


def differential(x, calculus="+") -> FormElem:
    """d(x) = x_(1) X_ij(x_(2)) theta_ij."""
    x = _coerce_alg(x)
    xs = tangent_basis(_calc_tag(calculus))
    return FormElem(
        {ij: convolve_right(xs[ij], x) for ij in INDEX_PAIRS}, calculus
    )


def commutator_differential(x, calculus="+") -> FormElem:
    """The same differential computed as theta x - x theta."""
    x = _coerce_alg(x)
    th = theta_form(calculus)
    return th * x - x * th


# --- involutions, beta and the square of the antipode -----------------------


def _pairing_star_coords(tag: str, calculus: str, under_s2: bool) -> dict:
    """Coordinates of X_ij* (optionally of S^2(X_ij)*) in the X basis.

    The star here is the pairing-induced one, which is the relevant map for
    every structure living on the calculus itself.
    """
    xs = tangent_basis(calculus)
    rows = {}
    for ij in INDEX_PAIRS:
        image = xs[ij]
        if under_s2:
            image = antipode_sq_dual(image)
        coords, leftover = tangent_coordinates(
            star_dual_pairing(image, tag), calculus
        )
        if not leftover.is_zero():
            raise ArithmeticError("star image leaves the tangent space")
        rows[ij] = coords
    return rows


_THETA_STAR_CACHE: dict = {}


def theta_star_table(structure, calculus="+") -> dict:
    """Images theta_ij* as {ij: [(kl, coefficient)]}.

    Determined by theta_i* = -conj(E^j_i) theta_j for X_i* = E^i_j X_j;
    this is the unique antilinear extension with (d x)* = d(x*).
    """
    tag = structure if isinstance(structure, str) else structure.tag
    calc = _calc_tag(calculus)
    key = (tag, calc)
    if key not in _THETA_STAR_CACHE:
        regime = _DUAL_STAR[tag][0]
        rows = _pairing_star_coords(tag, calc, under_s2=False)
        table = {}
        for ij in INDEX_PAIRS:
            entries = []
            for kl in INDEX_PAIRS:
                c = rows[kl][ij]
                if not c.is_zero():
                    entries.append((kl, -c.conj(regime)))
            table[ij] = entries
        _THETA_STAR_CACHE[key] = table
    return _THETA_STAR_CACHE[key]


def star_form(w: FormElem, structure) -> FormElem:
    """(a theta_ij)* = theta_ij* a*, an antilinear involution of the calculus."""
    tag = structure if isinstance(structure, str) else structure.tag
    table = theta_star_table(tag, w.calculus)
    out = FormElem.zero(w.calculus)
    for ij, a in w.coeffs.items():
        astar = star(a, tag)
        for kl, c in table[ij]:
            out = out + FormElem({kl: AlgElem.from_scalar(c)}, w.calculus) * astar
    return out


_BETA_MATRIX_CACHE: dict = {}


def beta_matrix(structure, calculus="+") -> list:
    """Matrix B with S^2(X_ij)* = B^ij_kl X_kl under the pairing star.

    This is the matrix entering beta on one-forms; it agrees with b_matrix
    for dagger and star.
    """
    tag = structure if isinstance(structure, str) else structure.tag
    calc = _calc_tag(calculus)
    key = (tag, calc)
    if key not in _BETA_MATRIX_CACHE:
        rows = _pairing_star_coords(tag, calc, under_s2=True)
        _BETA_MATRIX_CACHE[key] = [
            [rows[ij][kl] for kl in INDEX_PAIRS] for ij in INDEX_PAIRS
        ]
    return _BETA_MATRIX_CACHE[key]


def beta_form(w: FormElem, structure) -> FormElem:
    """beta(a theta_ij) = beta(theta_ij) beta(a) with beta(theta_i) = conj(B^j_i) theta_j."""
    tag = structure if isinstance(structure, str) else structure.tag
    regime = _DUAL_STAR[tag][0]
    bmat = beta_matrix(tag, w.calculus)
    out = FormElem.zero(w.calculus)
    for ij, a in w.coeffs.items():
        col = INDEX_PAIRS.index(ij)
        image = FormElem(
            {
                kl: AlgElem.from_scalar(bmat[row][col].conj(regime))
                for row, kl in enumerate(INDEX_PAIRS)
            },
            w.calculus,
        )
        out = out + image * beta(a, tag)
    return out


_S2_THETA = {(1, 1): qpow(2), (1, 2): ONE, (2, 1): ONE, (2, 2): qpow(-2)}


def antipode_sq_form(w: FormElem) -> FormElem:
    return FormElem(
        {ij: antipode_sq(a).scale(_S2_THETA[ij]) for ij, a in w.coeffs.items()},
        w.calculus,
    )


# --- right coaction ---------------------------------------------------------


def right_coaction(w: FormElem) -> dict:
    """Delta_R(a theta_ij) = a_(1) theta_kl (x) a_(2) u^k_i u^l_j.

    Returns {(k, l): tensor dict over pairs of coordinate-ring keys}.
    """
    out: dict = {}
    for (i, j), a in w.coeffs.items():
        for key, c in a.terms.items():
            for (k1, k2), cc in coproduct_mono(key).items():
                base = AlgElem({k2: c * cc})
                for k in (1, 2):
                    for l in (1, 2):
                        right = base * U_MATRIX[k - 1][i - 1] * U_MATRIX[l - 1][j - 1]
                        if right.is_zero():
                            continue
                        slot = out.setdefault((k, l), {})
                        for key2, c2 in right.terms.items():
                            cur = slot.get((k1, key2))
                            new = c2 if cur is None else cur + c2
                            if new.is_zero():
                                slot.pop((k1, key2), None)
                            else:
                                slot[(k1, key2)] = new
    return {kl: t for kl, t in out.items() if t}
