"""Quantum Clifford algebra of the four-dimensional calculi and its spinors.

The Clifford algebra is the tensor algebra of the invariant one-forms modulo
rho - g(rho) for rho in ker(id - sigma), with sigma the braiding and g the
sigma-metric.  The ten rewrite rules for descending products theta_p theta_r
(generator order theta_11 < theta_12 < theta_21 < theta_22) are derived here
from that kernel by elimination, and the strictly ascending words form a
16-dimensional basis of the invariant part.  Coefficients from the coordinate
ring sit on the left and move through generators with the structure
functionals of the chosen calculus.

The spinor module is the minimal left ideal spanned over the coordinate ring
by

    psi+1 = q/([2] c1) theta_11 theta_12 theta_21 theta_22,
    psi+2 = theta_21 theta_22,
    psi-1 = theta_11 theta_21 theta_22,
    psi-2 = q theta_12 theta_21 theta_22,

stored abstractly on the four labels; the embedding above is kept as a
checked isomorphism.  Right multiplication, the crossed-product coaction,
the involutions and the hermitean metric live here as well.  The involution
matrix and the invariant metric are both obtained from solvers (compatibility
with the bimodule structure, respectively symmetry with respect to beta), not
transcribed.
"""

from functools import lru_cache
from itertools import combinations, product

from .scalars import C1, C2, I, ONE, ZERO, ScalarQ, qint, qpow, spow
from .hopf import (
    AlgElem,
    U_MATRIX,
    _coerce_alg,
    _key_grading,
    beta,
    coproduct_mono,
    haar,
    star,
)
from .dualfunc import (
    INDEX_PAIRS,
    convolve_right,
    f_matrix,
    ftilde_matrix,
    star_dual_pairing,
)
from .dualfunc import _DUAL_STAR
from .forms import FormElem, _calc_tag, beta_matrix
from .tensors import TensorOp, braiding_sigma, metric_g

_IDX = {ij: n for n, ij in enumerate(INDEX_PAIRS)}
GEN_GRADE = (1, 0, 0, -1)


def _acc(table: dict, key, val: ScalarQ) -> None:
    cur = table.get(key)
    new = val if cur is None else cur + val
    if new.is_zero():
        table.pop(key, None)
    else:
        table[key] = new


def _acc_alg(table: dict, key, val: AlgElem) -> None:
    cur = table.get(key)
    new = val if cur is None else cur + val
    if new.is_zero():
        table.pop(key, None)
    else:
        table[key] = new


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------

_TABLE_CACHE: dict = {}


def _rewrite_table() -> dict:
    """Descending products solved from the defining ideal.

    Returns {(p, r): (pairs, const)} for p >= r, meaning

        theta_p theta_r = sum pairs[(c, d)] theta_c theta_d + const

    with c < d throughout.  Every kernel vector v of id - sigma yields the
    relation sum v_{ij,kl} theta_ij theta_kl = g(v); elimination with the
    descending pair-words in front turns these ten relations into the table.
    The first call also checks that reduction of all 64 generator triples is
    associative, so the ascending words really form a basis.
    """
    if "table" in _TABLE_CACHE:
        return _TABLE_CACHE["table"]
    gmap = metric_g()
    kernel = (TensorOp.identity(4) - braiding_sigma()).kernel_basis()
    bad = [(p, r) for p in range(4) for r in range(4) if p >= r]
    good = [(p, r) for p in range(4) for r in range(4) if p < r]
    cols = {w: n for n, w in enumerate(bad + good)}
    nuni = len(cols)
    rows = []
    for vec in kernel:
        row = [ZERO] * (nuni + 1)
        gv = ZERO
        for (i, j, k, l), c in vec.items():
            w = (_IDX[(i, j)], _IDX[(k, l)])
            row[cols[w]] = row[cols[w]] + c
            gv = gv + c * gmap.entry((), (i, j, k, l))
        row[nuni] = -gv
        rows.append(row)
    pivots: dict = {}
    for row in rows:
        row = list(row)
        for col in range(nuni + 1):
            if row[col].is_zero():
                continue
            if col in pivots:
                f = row[col]
                prow = pivots[col]
                row = [x - f * y for x, y in zip(row, prow)]
                continue
            inv = ONE / row[col]
            pivots[col] = [x * inv for x in row]
            break
    if sorted(pivots) != list(range(len(bad))):
        raise ArithmeticError("relations do not eliminate the descending words")
    for col in reversed(range(len(bad))):
        row = pivots[col]
        for col2 in range(col + 1, len(bad)):
            f = row[col2]
            if f.is_zero():
                continue
            prow = pivots[col2]
            row = [x - f * y for x, y in zip(row, prow)]
        pivots[col] = row
    table = {}
    for col, (p, r) in enumerate(bad):
        row = pivots[col]
        pairs = {}
        for w in good:
            c = row[cols[w]]
            if not c.is_zero():
                if w[0] >= p:
                    raise ArithmeticError("rewrite step does not decrease")
                pairs[w] = -c
        table[(p, r)] = (pairs, -row[nuni])
    _TABLE_CACHE["table"] = table
    defects = overlap_defects()
    if defects:
        raise ArithmeticError("rewriting is not confluent: %r" % (defects,))
    return table


@lru_cache(maxsize=None)
def _gen_times_word(g: int, word: tuple) -> tuple:
    """theta_g times an ascending word, as ((ascending word, coefficient), ...)."""
    if not word or g < word[0]:
        return (((g,) + word, ONE),)
    pairs, const = _rewrite_table()[(g, word[0])]
    rest = word[1:]
    out: dict = {}
    if not const.is_zero():
        _acc(out, rest, const)
    for (c, d), coef in pairs.items():
        for w1, c1 in _gen_times_word(d, rest):
            for w2, c2 in _gen_times_word(c, w1):
                _acc(out, w2, coef * c1 * c2)
    return tuple(out.items())


def _word_mul(v, w) -> dict:
    """Normal form of (free word v) times (ascending word w)."""
    terms = {tuple(w): ONE}
    for g in reversed(tuple(v)):
        nxt: dict = {}
        for word, c in terms.items():
            for w2, c2 in _gen_times_word(g, word):
                _acc(nxt, w2, c * c2)
        terms = nxt
    return terms


def overlap_defects() -> list:
    """Triples (x, y, z) where (theta_x theta_y) theta_z and
    theta_x (theta_y theta_z) reduce differently; empty means confluent."""
    bad = []
    for x, y, z in product(range(4), repeat=3):
        left: dict = {}
        for w, c in _gen_times_word(x, (y,)):
            for w2, c2 in _word_mul(w, (z,)).items():
                _acc(left, w2, c * c2)
        right: dict = {}
        for w, c in _gen_times_word(y, (z,)):
            for w2, c2 in _gen_times_word(x, w):
                _acc(right, w2, c * c2)
        for w in set(left) | set(right):
            if left.get(w, ZERO) != right.get(w, ZERO):
                bad.append((x, y, z))
                break
    return bad


def invariant_words() -> tuple:
    """The 16 ascending basis words, shortest first."""
    words = []
    for n in range(5):
        words.extend(combinations(range(4), n))
    return tuple(words)


def _word_times_alg(word: tuple, x: AlgElem, calculus: str) -> dict:
    """word . x = sum x' . word', moving x through with the structure
    functionals; words on the output side are free (not reordered)."""
    if x.is_zero():
        return {}
    if not word:
        return {(): x}
    fm = f_matrix(calculus)
    last = INDEX_PAIRS[word[-1]]
    out: dict = {}
    for r in range(4):
        moved = convolve_right(fm[(last, INDEX_PAIRS[r])], x)
        if moved.is_zero():
            continue
        for wfree, deeper in _word_times_alg(word[:-1], moved, calculus).items():
            _acc_alg(out, wfree + (r,), deeper)
    return out


# ---------------------------------------------------------------------------
# Clifford elements
# ---------------------------------------------------------------------------


class CliffElem:
    """Clifford algebra element: map from ascending generator words to left
    coordinate-ring coefficients, tagged with the calculus."""

    __slots__ = ("terms", "calculus")

    def __init__(self, terms: dict | None = None, calculus="+"):
        self.calculus = _calc_tag(calculus)
        self.terms = {}
        if terms:
            for word, val in terms.items():
                if not val.is_zero():
                    self.terms[tuple(word)] = val

    @staticmethod
    def zero(calculus="+") -> "CliffElem":
        return CliffElem(None, calculus)

    @staticmethod
    def one(calculus="+") -> "CliffElem":
        return CliffElem({(): AlgElem.one()}, calculus)

    def _check(self, other: "CliffElem"):
        if self.calculus != other.calculus:
            raise ValueError("cannot mix elements of the two calculi")

    def __add__(self, other):
        if not isinstance(other, CliffElem):
            return NotImplemented
        self._check(other)
        out = CliffElem(None, self.calculus)
        out.terms = dict(self.terms)
        for word, val in other.terms.items():
            _acc_alg(out.terms, word, val)
        return out

    def __sub__(self, other):
        if not isinstance(other, CliffElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = CliffElem(None, self.calculus)
        out.terms = {w: -v for w, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if isinstance(other, CliffElem):
            self._check(other)
            out = CliffElem(None, self.calculus)
            for v, a in self.terms.items():
                for w, b in other.terms.items():
                    for vfree, moved in _word_times_alg(v, b, self.calculus).items():
                        coef = a * moved
                        if coef.is_zero():
                            continue
                        for word, c in _word_mul(vfree, w).items():
                            _acc_alg(out.terms, word, coef.scale(c))
            return out
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        return self * CliffElem({(): x}, self.calculus)

    def __rmul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        out = CliffElem(None, self.calculus)
        for w, v in self.terms.items():
            prod = x * v
            if not prod.is_zero():
                out.terms[w] = prod
        return out

    def scale(self, c: ScalarQ) -> "CliffElem":
        out = CliffElem(None, self.calculus)
        if not c.is_zero():
            out.terms = {w: v.scale(c) for w, v in self.terms.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, CliffElem):
            return NotImplemented
        if self.calculus != other.calculus:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[w] == v for w, v in self.terms.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def parity_split(self):
        """(even, odd) parts by word length."""
        even = CliffElem(None, self.calculus)
        odd = CliffElem(None, self.calculus)
        for w, v in self.terms.items():
            (even if len(w) % 2 == 0 else odd).terms[w] = v
        return even, odd

    def grading(self):
        """The common degree for |theta_ij| = 3 - i - j plus the coefficient
        grading, or None if the element is not homogeneous."""
        grades = set()
        for w, v in self.terms.items():
            base = sum(GEN_GRADE[g] for g in w)
            cg = v.grading()
            if cg is None:
                return None
            grades.add(base + cg)
        if len(grades) == 1:
            return grades.pop()
        return None if grades else 0

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w in sorted(self.terms, key=lambda t: (len(t), t)):
            name = "*".join("th%d%d" % INDEX_PAIRS[g] for g in w) or "1"
            bits.append("(%r)*%s" % (self.terms[w], name))
        return " + ".join(bits)


def cliff_word(ijs, coeff=None, calculus="+") -> CliffElem:
    """Normal form of coeff * theta_{i1 j1} ... theta_{ik jk}."""
    letters = tuple(_IDX[tuple(ij)] for ij in ijs)
    if coeff is None:
        a = AlgElem.one()
    elif isinstance(coeff, ScalarQ):
        a = AlgElem.from_scalar(coeff)
    else:
        a = coeff
    out = CliffElem(None, calculus)
    for word, c in _word_mul(letters, ()).items():
        _acc_alg(out.terms, word, a.scale(c))
    return out


def cliff_from_form(w: FormElem) -> CliffElem:
    return CliffElem({(_IDX[ij],): a for ij, a in w.coeffs.items()}, w.calculus)


def theta_cl(i: int, j: int, calculus="+") -> CliffElem:
    return CliffElem({(_IDX[(i, j)],): AlgElem.one()}, calculus)


def beta_cl(u: CliffElem, structure) -> CliffElem:
    """beta(a theta_{i1} ... theta_{ik}) = beta(theta_{ik}) ... beta(theta_{i1})
    beta(a); antilinear, antimultiplicative, involutive."""
    tag = structure if isinstance(structure, str) else structure.tag
    regime = _DUAL_STAR[tag][0]
    bmat = beta_matrix(tag, u.calculus)
    images = [
        CliffElem(
            {
                (r,): AlgElem.from_scalar(bmat[r][p].conj(regime))
                for r in range(4)
            },
            u.calculus,
        )
        for p in range(4)
    ]
    out = CliffElem.zero(u.calculus)
    for word, a in u.terms.items():
        img = CliffElem.one(u.calculus)
        for g in word:
            img = images[g] * img
        out = out + img * beta(a, tag)
    return out


def simplicity_saturation_ranks() -> list:
    """Dimension of the invariant two-sided ideal generated by each basis
    word, after saturating under products with the four generators."""
    ranks = []
    for w0 in invariant_words():
        pivots: dict = {}
        queue = [_gauss_insert(pivots, {w0: ONE})]
        while queue:
            vec = queue.pop()
            if vec is None:
                continue
            for g in range(4):
                left: dict = {}
                right: dict = {}
                for w, c in vec.items():
                    for w2, c2 in _gen_times_word(g, w):
                        _acc(left, w2, c * c2)
                    for w2, c2 in _word_mul(w, (g,)).items():
                        _acc(right, w2, c * c2)
                queue.append(_gauss_insert(pivots, left))
                queue.append(_gauss_insert(pivots, right))
        ranks.append(len(pivots))
    return ranks


def _gauss_insert(pivots: dict, vec: dict):
    """Reduce vec against the pivot rows; on a new pivot, store its
    normalized row and return a copy, else return None."""
    vec = dict(vec)
    while vec:
        col = min(vec)
        prow = pivots.get(col)
        if prow is None:
            inv = ONE / vec[col]
            row = {c: v * inv for c, v in vec.items()}
            pivots[col] = row
            return dict(row)
        f = vec.pop(col)
        for c2, v2 in prow.items():
            if c2 == col:
                continue
            _acc(vec, c2, -f * v2)
    return None


# ---------------------------------------------------------------------------
# The spinor module
# ---------------------------------------------------------------------------

PSI_INDEX = ((1, 1), (1, 2), (-1, 1), (-1, 2))

_PSI_WORDS = {
    (1, 1): ((0, 1, 2, 3), qpow(1) / (qint(2) * C1)),
    (1, 2): ((2, 3), ONE),
    (-1, 1): ((0, 2, 3), ONE),
    (-1, 2): ((1, 2, 3), qpow(1)),
}


class SpinorElem:
    """Spinor: map (eta, i) -> left coordinate-ring coefficient, eta = +-1
    the chirality, i = 1, 2."""

    __slots__ = ("coeffs", "calculus")

    def __init__(self, coeffs: dict | None = None, calculus="+"):
        self.calculus = _calc_tag(calculus)
        self.coeffs = {}
        if coeffs:
            for label, val in coeffs.items():
                if not val.is_zero():
                    self.coeffs[label] = val

    @staticmethod
    def zero(calculus="+") -> "SpinorElem":
        return SpinorElem(None, calculus)

    def _check(self, other: "SpinorElem"):
        if self.calculus != other.calculus:
            raise ValueError("cannot mix spinors of the two calculi")

    def __add__(self, other):
        if not isinstance(other, SpinorElem):
            return NotImplemented
        self._check(other)
        out = SpinorElem(None, self.calculus)
        out.coeffs = dict(self.coeffs)
        for label, val in other.coeffs.items():
            _acc_alg(out.coeffs, label, val)
        return out

    def __sub__(self, other):
        if not isinstance(other, SpinorElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = SpinorElem(None, self.calculus)
        out.coeffs = {l: -v for l, v in self.coeffs.items()}
        return out

    def __mul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        ft = ftilde_matrix(self.calculus)
        out = SpinorElem.zero(self.calculus)
        for label, a in self.coeffs.items():
            row = PSI_INDEX.index(label)
            for col in range(4):
                f = ft[row][col]
                if f.is_zero():
                    continue
                moved = convolve_right(f, x)
                if moved.is_zero():
                    continue
                _acc_alg(out.coeffs, PSI_INDEX[col], a * moved)
        return out

    def __rmul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        out = SpinorElem(None, self.calculus)
        for label, v in self.coeffs.items():
            prod = x * v
            if not prod.is_zero():
                out.coeffs[label] = prod
        return out

    def scale(self, c: ScalarQ) -> "SpinorElem":
        out = SpinorElem(None, self.calculus)
        if not c.is_zero():
            out.coeffs = {l: v.scale(c) for l, v in self.coeffs.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, SpinorElem):
            return NotImplemented
        if self.calculus != other.calculus:
            return False
        if self.coeffs.keys() != other.coeffs.keys():
            return False
        return all(other.coeffs[l] == v for l, v in self.coeffs.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def chirality_split(self):
        """(positive, negative) chirality parts."""
        plus = SpinorElem(None, self.calculus)
        minus = SpinorElem(None, self.calculus)
        for (eta, i), v in self.coeffs.items():
            (plus if eta > 0 else minus).coeffs[(eta, i)] = v
        return plus, minus

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for label in PSI_INDEX:
            if label in self.coeffs:
                eta, i = label
                bits.append(
                    "(%r)*psi%s%d" % (self.coeffs[label], "+" if eta > 0 else "-", i)
                )
        return " + ".join(bits)


def psi_basis(calculus="+") -> dict:
    return {
        label: SpinorElem({label: AlgElem.one()}, calculus) for label in PSI_INDEX
    }


def spinor_to_cliff(psi: SpinorElem) -> CliffElem:
    out = CliffElem(None, psi.calculus)
    for label, a in psi.coeffs.items():
        word, norm = _PSI_WORDS[label]
        _acc_alg(out.terms, word, a.scale(norm))
    return out


def cliff_to_spinor(u: CliffElem) -> SpinorElem:
    lookup = {word: (label, norm) for label, (word, norm) in _PSI_WORDS.items()}
    coeffs = {}
    for word, a in u.terms.items():
        if word not in lookup:
            raise ValueError("element does not lie in the spinor ideal")
        label, norm = lookup[word]
        coeffs[label] = a.scale(ONE / norm)
    return SpinorElem(coeffs, u.calculus)


@lru_cache(maxsize=None)
def theta_action_table() -> dict:
    """Left action of the generators on the invariant spinors:
    {(p, label): ((label', coefficient), ...)}, computed in the Clifford
    algebra and pulled back through the spinor embedding."""
    lookup = {word: (label, norm) for label, (word, norm) in _PSI_WORDS.items()}
    table = {}
    for p in range(4):
        for label, (word, norm) in _PSI_WORDS.items():
            acc: dict = {}
            for w2, c in _gen_times_word(p, word):
                if w2 not in lookup:
                    raise ArithmeticError("action leaves the spinor ideal")
                label2, norm2 = lookup[w2]
                _acc(acc, label2, norm * c / norm2)
            table[(p, label)] = tuple(acc.items())
    return table


def spinor_action(u, psi: SpinorElem) -> SpinorElem:
    """Clifford multiplication on the spinor module; u may be a Clifford
    element or a one-form."""
    if isinstance(u, FormElem):
        u = cliff_from_form(u)
    if u.calculus != psi.calculus:
        raise ValueError("cannot mix the two calculi")
    table = theta_action_table()
    out = SpinorElem.zero(psi.calculus)
    for word, a in u.terms.items():
        for label, b in psi.coeffs.items():
            for wfree, moved in _word_times_alg(word, b, psi.calculus).items():
                cur = {label: ONE}
                for g in reversed(wfree):
                    nxt: dict = {}
                    for lab, c in cur.items():
                        for lab2, c2 in table[(g, lab)]:
                            _acc(nxt, lab2, c * c2)
                    cur = nxt
                coef = a * moved
                for lab, c in cur.items():
                    _acc_alg(out.coeffs, lab, coef.scale(c))
    return out


# ---------------------------------------------------------------------------
# The crossed product and its coaction on spinors
# ---------------------------------------------------------------------------


def chi_act(n: int, x: AlgElem) -> AlgElem:
    """chi^n acting on the coordinate ring: a monomial of grading m is
    rescaled by q^(-n m)."""
    return AlgElem(
        {key: c * qpow(-n * _key_grading(key)) for key, c in x.terms.items()}
    )


class ExtAlgElem:
    """Element of the crossed product of the coordinate ring with the group
    algebra of chi: map from chi powers to coordinate-ring elements."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        if terms:
            for n, val in terms.items():
                if not val.is_zero():
                    self.terms[n] = val

    @staticmethod
    def zero() -> "ExtAlgElem":
        return ExtAlgElem()

    @staticmethod
    def one() -> "ExtAlgElem":
        return ExtAlgElem({0: AlgElem.one()})

    @staticmethod
    def from_alg(x: AlgElem, chi: int = 0) -> "ExtAlgElem":
        return ExtAlgElem({chi: x})

    def __add__(self, other):
        if not isinstance(other, ExtAlgElem):
            return NotImplemented
        out = ExtAlgElem()
        out.terms = dict(self.terms)
        for n, val in other.terms.items():
            _acc_alg(out.terms, n, val)
        return out

    def __sub__(self, other):
        if not isinstance(other, ExtAlgElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = ExtAlgElem()
        out.terms = {n: -v for n, v in self.terms.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, ExtAlgElem):
            x = _coerce_alg(other)
            if x is None:
                return NotImplemented
            other = ExtAlgElem({0: x})
        out = ExtAlgElem()
        for k, a in self.terms.items():
            for l, b in other.terms.items():
                prod = a * chi_act(k, b)
                if not prod.is_zero():
                    _acc_alg(out.terms, k + l, prod)
        return out

    def __rmul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        return ExtAlgElem({0: x}) * self

    def __eq__(self, other):
        if not isinstance(other, ExtAlgElem):
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[n] == v for n, v in self.terms.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for n in sorted(self.terms):
            if n == 0:
                bits.append("(%r)" % (self.terms[n],))
            else:
                bits.append("(%r)*chi^%d" % (self.terms[n], n))
        return " + ".join(bits)


def star_ext(t: ExtAlgElem, structure) -> ExtAlgElem:
    """(a chi^k)* = chi^k a*, since chi is fixed by every involution."""
    return ExtAlgElem(
        {k: chi_act(k, star(a, structure)) for k, a in t.terms.items()}
    )


def coaction_spinor(psi: SpinorElem) -> dict:
    """The crossed-product coaction on spinors,

        Delta_R(a psi^eta_i) = a_(1) psi^eta_j (x) a_(2) u^j_i chi,

    as {((eta, j), left key, right key, chi power): coefficient}."""
    out: dict = {}
    for (eta, i), a in psi.coeffs.items():
        for key, c in a.terms.items():
            for (k1, k2), cc in coproduct_mono(key).items():
                base = AlgElem({k2: c * cc})
                for j in (1, 2):
                    right = base * U_MATRIX[j - 1][i - 1]
                    for key2, c2 in right.terms.items():
                        _acc(out, ((eta, j), k1, key2, 1), c2)
    return out


# ---------------------------------------------------------------------------
# Involutions of the spinor module
# ---------------------------------------------------------------------------


def _nullspace(rows: list, ncols: int) -> list:
    """Nullspace basis of a sparse row system over the scalar field."""
    pivots: dict = {}
    for row in rows:
        row = dict(row)
        while row:
            col = min(row)
            prow = pivots.get(col)
            if prow is None:
                inv = ONE / row[col]
                nrow = {c: v * inv for c, v in row.items()}
                for pc, pr in pivots.items():
                    f = pr.get(col)
                    if f is None:
                        continue
                    for c2, v2 in nrow.items():
                        _acc(pr, c2, -f * v2)
                pivots[col] = nrow
                break
            f = row.pop(col)
            for c2, v2 in prow.items():
                if c2 == col:
                    continue
                _acc(row, c2, -f * v2)
    basis = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for pc, prow in pivots.items():
            val = prow.get(fc)
            if val is not None:
                vec[pc] = -val
        basis.append(vec)
    return basis


_SPINOR_STAR_CACHE: dict = {}


def spinor_star_matrix(structure, calculus="+") -> list:
    """The matrix lambda with psi_I* = lambda^I_J psi_J.

    Solved from the bimodule compatibility lambda ftilde = ftilde* lambda,
    the star on functionals being the pairing-induced one.  The solution
    space has the dimension of the bimodule commutant (so the involution is
    unique up to equivalence); the returned representative is normalized to
    have unit entries in the psi+2 and psi-1 rows and is checked to be
    involutive.  Raises ValueError when no solution exists.
    """
    tag = structure if isinstance(structure, str) else structure.tag
    calc = _calc_tag(calculus)
    key = (tag, calc)
    if key in _SPINOR_STAR_CACHE:
        return _SPINOR_STAR_CACHE[key]
    regime = _DUAL_STAR[tag][0]
    ft = ftilde_matrix(calc)
    fstar = [
        [star_dual_pairing(ft[i][l], tag) for l in range(4)] for i in range(4)
    ]
    rows_map: dict = {}
    for i in range(4):
        for k in range(4):
            for j in range(4):
                for mono, c in ft[j][k].terms.items():
                    _acc(rows_map.setdefault((i, k, mono), {}), 4 * i + j, c)
                for mono, c in fstar[i][j].terms.items():
                    _acc(rows_map.setdefault((i, k, mono), {}), 4 * j + k, -c)
    basis = _nullspace(list(rows_map.values()), 16)
    if not basis:
        raise ValueError(
            "no involution of the spinor module extends this star structure "
            "on the %s calculus" % ("minus" if calc == "-" else "plus")
        )
    if len(basis) != 2:
        raise ArithmeticError(
            "involution space has dimension %d, not the commutant dimension"
            % len(basis)
        )
    anchors = []
    for row in (1, 2):
        cols = [
            j
            for j in range(4)
            if any(not vec[4 * row + j].is_zero() for vec in basis)
        ]
        if len(cols) != 1:
            raise ArithmeticError("normalization row is not one-dimensional")
        anchors.append(4 * row + cols[0])
    a1, a2 = anchors
    v1, v2 = basis
    det = v1[a1] * v2[a2] - v2[a1] * v1[a2]
    if det.is_zero():
        raise ArithmeticError("normalization does not pin the involution")
    al = (v2[a2] - v2[a1]) / det
    be = (v1[a1] - v1[a2]) / det
    lam = [
        [al * v1[4 * i + j] + be * v2[4 * i + j] for j in range(4)]
        for i in range(4)
    ]
    for i in range(4):
        for k in range(4):
            total = ZERO
            for j in range(4):
                total = total + lam[i][j].conj(regime) * lam[j][k]
            if total != (ONE if i == k else ZERO):
                raise ArithmeticError("normalized solution is not involutive")
    _SPINOR_STAR_CACHE[key] = lam
    return lam


def spinor_star(psi: SpinorElem, structure) -> SpinorElem:
    """(a psi_I)* = lambda^I_J psi_J a*; antilinear and involutive where it
    exists (dagger and star do not extend to the minus calculus)."""
    tag = structure if isinstance(structure, str) else structure.tag
    lam = spinor_star_matrix(tag, psi.calculus)
    basis = psi_basis(psi.calculus)
    out = SpinorElem.zero(psi.calculus)
    for label, a in psi.coeffs.items():
        row = PSI_INDEX.index(label)
        astar = star(a, tag)
        for col in range(4):
            if lam[row][col].is_zero():
                continue
            out = out + (basis[PSI_INDEX[col]] * astar).scale(lam[row][col])
    return out


# ---------------------------------------------------------------------------
# The invariant hermitean metric
# ---------------------------------------------------------------------------


def _metric_table(tag: str) -> dict:
    """Invariant metric values in the normalization with the free real
    factor c2, hermitean for the respective conjugation regime.

    For dagger and star the two chiralities pair with weights 1 and q^2
    (q^2 carrying a sign for star).  For sharp each chirality pairs with
    itself antidiagonally; hermiticity in the unitary regime forces the
    imaginary unit and half-integer powers of q there, and the negative
    chirality carries the extra weight [2] c1.
    """
    if tag == "dagger":
        return {
            ((eta, i), (-eta, i)): C2 * (ONE if i == 1 else qpow(2))
            for eta in (1, -1)
            for i in (1, 2)
        }
    if tag == "star":
        return {
            ((eta, i), (-eta, i)): C2 * (ONE if i == 1 else -qpow(2))
            for eta in (1, -1)
            for i in (1, 2)
        }
    if tag == "sharp":
        out = {}
        for eta in (1, -1):
            weight = ONE if eta > 0 else qint(2) * C1
            out[((eta, 1), (eta, 2))] = -I * C2 * spow(-1) * weight
            out[((eta, 2), (eta, 1))] = I * C2 * spow(1) * weight
        return out
    raise KeyError(tag)


_METRIC_CACHE: dict = {}


def spinor_metric_matrix(structure, calculus="+") -> dict:
    """Invariant metric values {(I, J): <psi_I, psi_J>}.

    The defining symmetry <theta psi_I, psi_J> = <psi_I, beta(theta) psi_J>
    for the four generators gives a linear system on the sixteen unknown
    values; its solution space is checked to be one-dimensional and to
    contain the tabulated normalization, which is returned.
    """
    tag = structure if isinstance(structure, str) else structure.tag
    calc = _calc_tag(calculus)
    key = (tag, calc)
    if key in _METRIC_CACHE:
        return _METRIC_CACHE[key]
    regime = _DUAL_STAR[tag][0]
    table = theta_action_table()
    bmat = beta_matrix(tag, calc)
    rows = []
    for p in range(4):
        betaact = {}
        for J in PSI_INDEX:
            acc: dict = {}
            for r in range(4):
                brp = bmat[r][p].conj(regime)
                if brp.is_zero():
                    continue
                for N, c2 in table[(r, J)]:
                    _acc(acc, N, brp * c2)
            betaact[J] = acc
        for Ii, I in enumerate(PSI_INDEX):
            for Ji, J in enumerate(PSI_INDEX):
                row: dict = {}
                for M, c in table[(p, I)]:
                    _acc(row, 4 * PSI_INDEX.index(M) + Ji, c)
                for N, c in betaact[J].items():
                    _acc(row, 4 * Ii + PSI_INDEX.index(N), -c.conj(regime))
                if row:
                    rows.append(row)
    basis = _nullspace(rows, 16)
    if len(basis) != 1:
        raise ArithmeticError(
            "metric solution space has dimension %d" % len(basis)
        )
    vec = basis[0]
    tab = _metric_table(tag)
    flat = {
        4 * i + j: tab.get((PSI_INDEX[i], PSI_INDEX[j]), ZERO)
        for i in range(4)
        for j in range(4)
    }
    lam = None
    for pos in range(16):
        if not vec[pos].is_zero():
            lam = flat[pos] / vec[pos]
            break
    if lam is None or lam.is_zero():
        raise ArithmeticError("metric solution is degenerate")
    for pos in range(16):
        if flat[pos] != lam * vec[pos]:
            raise ArithmeticError(
                "tabulated metric is not the solved one at position %d" % pos
            )
    _METRIC_CACHE[key] = tab
    return tab


def metric0_pair(phi: SpinorElem, psi: SpinorElem, structure) -> AlgElem:
    """<a psi_I, b psi_J>_0 = a <psi_I, psi_J> b*, with values in the
    coordinate ring; antilinear in the second slot."""
    tag = structure if isinstance(structure, str) else structure.tag
    phi._check(psi)
    table = spinor_metric_matrix(tag, phi.calculus)
    out = AlgElem.zero()
    for I, a in phi.coeffs.items():
        for J, b in psi.coeffs.items():
            val = table.get((I, J))
            if val is None:
                continue
            out = out + (a * star(b, tag)).scale(val)
    return out


def metric_pair(phi: SpinorElem, psi: SpinorElem, structure) -> ScalarQ:
    """The metric: Haar state applied to the bimodule-valued pairing."""
    return haar(metric0_pair(phi, psi, structure))
