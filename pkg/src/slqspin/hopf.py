"""The coordinate Hopf algebra of the quantum group SL_q(2).

Elements are kept in PBW form with the basis a^k b^l c^m and b^l c^m d^k
(k >= 1): no monomial contains both a and d, the pair being eliminated
through a d = 1 + q b c.  A monomial is encoded as a key (k, l, m) with
k >= 0 meaning a^k b^l c^m and k < 0 meaning b^l c^m d^(-k).

The module also carries the structure maps (coproduct, counit, antipode),
the three star structures, the modular automorphism rho with its involution
beta, the Haar functional (obtained by solving the invariance equations on
a degree-filtered span), and the corepresentation matrices up to spin 3/2.
"""

from __future__ import annotations

from fractions import Fraction

from .scalars import (
    ONE,
    QHAT,
    REAL,
    UNIT,
    ZERO,
    ScalarQ,
    qint,
    qpow,
    spow,
)

KEY_ONE = (0, 0, 0)


def _key_degree(key) -> int:
    k, l, m = key
    return abs(k) + l + m


def _key_grading(key) -> int:
    return key[2] - key[1]


# bc-polynomial coefficient lists for a^k d^k and d^k a^k
_AD_CACHE: dict = {}


def _ad_coeffs(k: int, sign: int) -> list:
    """Coefficients [phi_0..phi_k] of prod_{j=1..k} (1 + q^(sign(2j-1)) bc)."""
    if k == 0:
        return [ONE]
    if (k, sign) not in _AD_CACHE:
        prev = _ad_coeffs(k - 1, sign)
        fac = qpow(sign * (2 * k - 1))
        out = [ZERO] * (k + 1)
        for t, c in enumerate(prev):
            out[t] = out[t] + c
            out[t + 1] = out[t + 1] + c * fac
        _AD_CACHE[(k, sign)] = out
    return _AD_CACHE[(k, sign)]


def _mono_mul(m1, m2) -> dict:
    k1, l1, m1_ = m1
    k2, l2, m2_ = m2
    if k1 >= 0 and k2 >= 0:
        coef = qpow(-k2 * (l1 + m1_))
        return {(k1 + k2, l1 + l2, m1_ + m2_): coef}
    if k1 < 0 and k2 < 0:
        coef = qpow(k1 * (l2 + m2_))
        return {(k1 + k2, l1 + l2, m1_ + m2_): coef}
    L, M = l1 + l2, m1_ + m2_
    out: dict = {}
    if k1 >= 0:
        # a^k1 b^l1 c^m1 . b^l2 c^m2 d^r
        r = -k2
        if k1 >= r:
            s = k1 - r
            base = qpow(r * (L + M))
            for t, c in enumerate(_ad_coeffs(r, 1)):
                if not c.is_zero():
                    out[(s, L + t, M + t)] = base * c
        else:
            s = r - k1
            base = qpow(k1 * (L + M))
            for t, c in enumerate(_ad_coeffs(k1, 1)):
                if not c.is_zero():
                    out[(-s, L + t, M + t)] = base * c
    else:
        # b^l1 c^m1 d^r . a^k2 b^l2 c^m2
        r = -k1
        if r >= k2:
            s = r - k2
            for t, c in enumerate(_ad_coeffs(k2, -1)):
                if not c.is_zero():
                    out[(-s, L + t, M + t)] = qpow(-s * (l2 + m2_ + 2 * t)) * c
        else:
            s = k2 - r
            for t, c in enumerate(_ad_coeffs(r, -1)):
                if not c.is_zero():
                    out[(s, L + t, M + t)] = qpow(-s * (l1 + m1_ + 2 * t)) * c
    return out


class AlgElem:
    """An element of O(SL_q(2)) as a map PBW key -> ScalarQ."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        self.terms = {}
        if terms:
            for key, val in terms.items():
                if not val.is_zero():
                    self.terms[key] = val

    @staticmethod
    def zero() -> "AlgElem":
        return AlgElem()

    @staticmethod
    def one() -> "AlgElem":
        return AlgElem({KEY_ONE: ONE})

    @staticmethod
    def from_scalar(c: ScalarQ) -> "AlgElem":
        return AlgElem({KEY_ONE: c})

    def __add__(self, other):
        other = _coerce_alg(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for key, val in other.terms.items():
            cur = terms.get(key)
            new = val if cur is None else cur + val
            if new.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = new
        out = AlgElem()
        out.terms = terms
        return out

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_alg(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_alg(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        out = AlgElem()
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        other = _coerce_alg(other)
        if other is None:
            return NotImplemented
        acc: dict = {}
        for key1, c1 in self.terms.items():
            for key2, c2 in other.terms.items():
                c = c1 * c2
                for key, w in _mono_mul(key1, key2).items():
                    t = c * w
                    cur = acc.get(key)
                    acc[key] = t if cur is None else cur + t
        out = AlgElem()
        out.terms = {k: v for k, v in acc.items() if not v.is_zero()}
        return out

    def __rmul__(self, other):
        other = _coerce_alg(other)
        if other is None:
            return NotImplemented
        return other * self

    def scale(self, c: ScalarQ) -> "AlgElem":
        out = AlgElem()
        if not c.is_zero():
            out.terms = {k: c * v for k, v in self.terms.items()}
        return out

    def __eq__(self, other):
        other = _coerce_alg(other)
        if other is None:
            return NotImplemented
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[k] == v for k, v in self.terms.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((_key_degree(k) for k in self.terms), default=0)

    def homogeneous_parts(self) -> dict:
        """Decompose by the grading |u^i_j| = i - j."""
        parts: dict = {}
        for key, val in self.terms.items():
            g = _key_grading(key)
            parts.setdefault(g, {})[key] = val
        return {g: AlgElem(t) for g, t in parts.items()}

    def grading(self):
        """The common grading degree, or None if inhomogeneous."""
        grades = {_key_grading(k) for k in self.terms}
        if len(grades) == 1:
            return grades.pop()
        return None if grades else 0

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, key=lambda t: (_key_degree(t), t)):
            k, l, m = key
            factors = []
            if k > 0:
                factors.append("a" if k == 1 else "a^%d" % k)
            if l:
                factors.append("b" if l == 1 else "b^%d" % l)
            if m:
                factors.append("c" if m == 1 else "c^%d" % m)
            if k < 0:
                factors.append("d" if k == -1 else "d^%d" % -k)
            word = "*".join(factors) if factors else "1"
            bits.append("(%r)*%s" % (self.terms[key], word))
        return " + ".join(bits)


def _coerce_alg(x):
    if isinstance(x, AlgElem):
        return x
    if isinstance(x, ScalarQ):
        return AlgElem.from_scalar(x)
    if isinstance(x, (int, Fraction)):
        return AlgElem.from_scalar(ScalarQ.from_fraction(Fraction(x)))
    return None


A = AlgElem({(1, 0, 0): ONE})
B = AlgElem({(0, 1, 0): ONE})
C = AlgElem({(0, 0, 1): ONE})
D = AlgElem({(-1, 0, 0): ONE})
UNIT_ELEM = AlgElem.one()

GENERATORS = {"a": A, "b": B, "c": C, "d": D}
U_MATRIX = [[A, B], [C, D]]


def normal_form(word) -> AlgElem:
    """PBW normal form of a free word in the generators (names or elements)."""
    out = UNIT_ELEM
    for letter in word:
        out = out * (GENERATORS[letter] if isinstance(letter, str) else letter)
    return out


# --- coalgebra structure ---------------------------------------------------

_COPRODUCT_GEN = {
    (1, 0, 0): {((1, 0, 0), (1, 0, 0)): ONE, ((0, 1, 0), (0, 0, 1)): ONE},
    (0, 1, 0): {((1, 0, 0), (0, 1, 0)): ONE, ((0, 1, 0), (-1, 0, 0)): ONE},
    (0, 0, 1): {((0, 0, 1), (1, 0, 0)): ONE, ((-1, 0, 0), (0, 0, 1)): ONE},
    (-1, 0, 0): {((0, 0, 1), (0, 1, 0)): ONE, ((-1, 0, 0), (-1, 0, 0)): ONE},
}

_COPRODUCT_CACHE: dict = {KEY_ONE: {(KEY_ONE, KEY_ONE): ONE}}


def tensor_mul(t1: dict, t2: dict) -> dict:
    """Product in A (x) A of sparse tensors {(key, key): ScalarQ}."""
    acc: dict = {}
    for (x1, y1), c1 in t1.items():
        for (x2, y2), c2 in t2.items():
            c = c1 * c2
            left = _mono_mul(x1, x2)
            right = _mono_mul(y1, y2)
            for kx, cx in left.items():
                cxc = c * cx
                for ky, cy in right.items():
                    t = cxc * cy
                    key = (kx, ky)
                    cur = acc.get(key)
                    acc[key] = t if cur is None else cur + t
    return {k: v for k, v in acc.items() if not v.is_zero()}


def coproduct_mono(key) -> dict:
    cached = _COPRODUCT_CACHE.get(key)
    if cached is not None:
        return cached
    k, l, m = key
    if k < 0:
        prev, gen = (k + 1, l, m), (-1, 0, 0)
    elif m > 0:
        prev, gen = (k, l, m - 1), (0, 0, 1)
    elif l > 0:
        prev, gen = (k, l - 1, 0), (0, 1, 0)
    else:
        prev, gen = (k - 1, 0, 0), (1, 0, 0)
    result = tensor_mul(coproduct_mono(prev), _COPRODUCT_GEN[gen])
    _COPRODUCT_CACHE[key] = result
    return result


def coproduct(x: AlgElem) -> dict:
    acc: dict = {}
    for key, c in x.terms.items():
        for pair, w in coproduct_mono(key).items():
            t = c * w
            cur = acc.get(pair)
            acc[pair] = t if cur is None else cur + t
    return {k: v for k, v in acc.items() if not v.is_zero()}


def counit(x: AlgElem) -> ScalarQ:
    total = ZERO
    for (k, l, m), c in x.terms.items():
        if l == 0 and m == 0:
            total = total + c
    return total


def antipode(x: AlgElem) -> AlgElem:
    """S(a)=d, S(b)=-q^-1 b, S(c)=-q c, S(d)=a, reversed on products."""
    terms: dict = {}
    for (k, l, m), c in x.terms.items():
        coef = c * qpow(m - l) * (ONE if (l + m) % 2 == 0 else -ONE)
        key = (-k, l, m)
        cur = terms.get(key)
        terms[key] = coef if cur is None else cur + coef
    return AlgElem(terms)


def antipode_sq(x: AlgElem) -> AlgElem:
    out = AlgElem()
    out.terms = {key: c * qpow(2 * (key[2] - key[1])) for key, c in x.terms.items()}
    return out


# --- star structures -------------------------------------------------------


class StarStructure:
    """One of the three real forms: generator images plus conjugation regime."""

    def __init__(self, tag, regime, images):
        self.tag = tag
        self.regime = regime
        self.images = images

    def __repr__(self):
        return "StarStructure(%s)" % self.tag


STAR_STRUCTURES = {
    "dagger": StarStructure(
        "dagger", REAL, {"a": D, "b": C.scale(-qpow(1)), "c": B.scale(-qpow(-1)), "d": A}
    ),
    "star": StarStructure(
        "star", REAL, {"a": D, "b": C.scale(qpow(1)), "c": B.scale(qpow(-1)), "d": A}
    ),
    "sharp": StarStructure("sharp", UNIT, {"a": A, "b": B, "c": C, "d": D}),
}


def _key_letters(key):
    k, l, m = key
    if k >= 0:
        return "a" * k + "b" * l + "c" * m
    return "b" * l + "c" * m + "d" * -k


def star(x: AlgElem, structure) -> AlgElem:
    """Antilinear antihomomorphism fixed by the generator images."""
    if isinstance(structure, str):
        structure = STAR_STRUCTURES[structure]
    out = AlgElem.zero()
    for key, c in x.terms.items():
        piece = AlgElem.from_scalar(c.conj(structure.regime))
        for letter in reversed(_key_letters(key)):
            piece = piece * structure.images[letter]
        out = out + piece
    return out


# --- modular automorphism and beta -----------------------------------------


def _solve_fundamental_intertwiner():
    """F in Mor(u, u^cc), i.e. F u = S^2(u) F, unique up to scale."""
    gens = [[A, B], [C, D]]
    # unknowns F_11 F_12 F_21 F_22; collect PBW coefficients of F u - S^2(u) F
    rows = []
    for i in range(2):
        for j in range(2):
            expr = {}
            for k in range(2):
                for key, c in gens[k][j].terms.items():
                    expr.setdefault(key, [ZERO] * 4)[2 * i + k] = (
                        expr.get(key, [ZERO] * 4)[2 * i + k] + c
                    )
            for k in range(2):
                for key, c in antipode_sq(gens[i][k]).terms.items():
                    cur = expr.setdefault(key, [ZERO] * 4)
                    cur[2 * k + j] = cur[2 * k + j] - c
            rows.extend(expr.values())
    # solve the homogeneous system by elimination
    pivots = {}
    for row in rows:
        row = list(row)
        for col, prow in pivots.items():
            if not row[col].is_zero():
                f = row[col]
                row = [row[t] - f * prow[t] for t in range(4)]
        lead = next((t for t in range(4) if not row[t].is_zero()), None)
        if lead is not None:
            inv = ONE / row[lead]
            pivots[lead] = [x * inv for x in row]
    free = [t for t in range(4) if t not in pivots]
    if len(free) != 1:
        raise ArithmeticError("fundamental intertwiner space has dimension %d" % len(free))
    sol = [ZERO] * 4
    sol[free[0]] = ONE
    for col, prow in pivots.items():
        sol[col] = -prow[free[0]]
    # normalize so that F_11 = q^-1
    if sol[0].is_zero():
        raise ArithmeticError("unexpected intertwiner normal form")
    fac = qpow(-1) / sol[0]
    return [[sol[0] * fac, sol[1] * fac], [sol[2] * fac, sol[3] * fac]]


_RHO_FACTORS: list | None = None


def _rho_factors():
    global _RHO_FACTORS
    if _RHO_FACTORS is None:
        F = _solve_fundamental_intertwiner()
        if not (F[0][1].is_zero() and F[1][0].is_zero()):
            raise ArithmeticError("fundamental intertwiner is not diagonal")
        trF = F[0][0] + F[1][1]
        trFinv = ONE / F[0][0] + ONE / F[1][1]
        ratio = trFinv / trF
        _RHO_FACTORS = [
            [F[0][0] * F[0][0] * ratio, F[0][0] * F[1][1] * ratio],
            [F[1][1] * F[0][0] * ratio, F[1][1] * F[1][1] * ratio],
        ]
    return _RHO_FACTORS


def rho(x: AlgElem) -> AlgElem:
    """The modular automorphism: h(xy) = h(y rho(x))."""
    fac = _rho_factors()
    f_a, f_b, f_c, f_d = fac[0][0], fac[0][1], fac[1][0], fac[1][1]
    terms = {}
    for (k, l, m), c in x.terms.items():
        if k >= 0:
            coef = c * f_a ** k * f_b ** l * f_c ** m
        else:
            coef = c * f_d ** (-k) * f_b ** l * f_c ** m
        terms[(k, l, m)] = coef
    return AlgElem(terms)


def beta(x: AlgElem, structure) -> AlgElem:
    return star(rho(x), structure)


# --- Haar functional -------------------------------------------------------

_HAAR_CACHE: dict = {}


def _haar_table(cap: int) -> dict:
    if cap in _HAAR_CACHE:
        return _HAAR_CACHE[cap]
    keys = [
        (k, l, m)
        for n in range(cap + 1)
        for k in range(-n, n + 1)
        for l in range(n + 1)
        for m in range(n + 1)
        if abs(k) + l + m == n
    ]
    index = {key: t for t, key in enumerate(keys)}
    nunk = len(keys)

    # equations: for x basis monomial, (h (x) id) Delta(x) - h(x) 1 = 0,
    # read off per second-leg monomial
    pivots: dict = {}

    def reduce_row(row: dict):
        changed = True
        while changed:
            changed = False
            for col in sorted(row):
                prow = pivots.get(col)
                if prow is None:
                    continue
                f = row.pop(col)
                for pc, pv in prow.items():
                    cur = row.get(pc, ZERO)
                    new = cur - f * pv
                    if new.is_zero():
                        row.pop(pc, None)
                    else:
                        row[pc] = new
                changed = True
                break
        return row

    def insert_row(row: dict):
        row = reduce_row(row)
        if not row:
            return
        lead = min(row)
        inv = ONE / row.pop(lead)
        pivots[lead] = {c: v * inv for c, v in row.items()}

    const_col = nunk  # affine column carrying the inhomogeneous part

    # normalization h(1) = 1
    insert_row({index[KEY_ONE]: ONE, const_col: -ONE})

    for xkey in keys:
        cop = coproduct_mono(xkey)
        by_second: dict = {}
        for (k1, k2), c in cop.items():
            by_second.setdefault(k2, {})[k1] = c
        for k2, firsts in by_second.items():
            row = {index[k1]: c for k1, c in firsts.items()}
            if k2 == KEY_ONE:
                cur = row.get(index[xkey], ZERO) - ONE
                if cur.is_zero():
                    row.pop(index[xkey], None)
                else:
                    row[index[xkey]] = cur
            if row:
                insert_row(dict(row))

    table = {}
    for key in keys:
        col = index[key]
        prow = pivots.get(col)
        if prow is None:
            raise ArithmeticError("Haar system underdetermined at %r" % (key,))
        extra = [c for c in prow if c != const_col]
        if extra:
            raise ArithmeticError("Haar system underdetermined at %r" % (key,))
        table[key] = -prow.get(const_col, ZERO)
    _HAAR_CACHE[cap] = table
    return table


def haar(x: AlgElem, cap: int = 8) -> ScalarQ:
    """Haar state of x, solved from left invariance on the degree-filtered span."""
    deg = x.degree()
    if deg > cap:
        raise ValueError(
            "element degree %d exceeds the Haar cap %d; raise the cap" % (deg, cap)
        )
    table = _haar_table(cap)
    total = ZERO
    for key, c in x.terms.items():
        val = table[key]
        if not val.is_zero():
            total = total + c * val
    return total


# --- corepresentations -----------------------------------------------------


class Corep:
    """Matrix corepresentation with the even part of q'-powers folded in.

    Entries whose conventional normalization carries a single factor
    q' = (1 + q^-2)^(1/2) are stored unnormalized; qp_parity marks them.
    """

    def __init__(self, spin, entries, qp_parity):
        self.spin = spin
        self.entries = entries
        self.qp_parity = qp_parity

    @property
    def size(self):
        return len(self.entries)


def corep_matrix(n) -> Corep:
    n = Fraction(n)
    if n == 0:
        return Corep(n, [[UNIT_ELEM]], [[0]])
    if n == Fraction(1, 2):
        return Corep(n, [[A, B], [C, D]], [[0, 0], [0, 0]])
    if n == 1:
        entries = [
            [A * A, A * B, B * B],
            [A * C, UNIT_ELEM + qint(2) * B * C, B * D],
            [C * C, C * D, D * D],
        ]
        parity = [[0, 1, 0], [1, 0, 1], [0, 1, 0]]
        return Corep(n, entries, parity)
    if n == Fraction(3, 2):
        return _corep_three_half()
    raise ValueError("corepresentation matrices are provided up to spin 3/2")


def _corep_three_half() -> Corep:
    from itertools import product as iproduct

    from .tensors import jones_wenzl

    p3 = jones_wenzl(3)
    cols = list(iproduct((1, 2), repeat=3))
    seeds = [(1, 1, 1), (1, 1, 2), (1, 2, 2), (2, 2, 2)]
    # basis of the image: B[row][J] = (P3 e_seed)_row
    Bmat = [[p3.entry(row, seed) for seed in seeds] for row in cols]
    # dual rows: solve C (B^T B) = B^T, then D = C P3 satisfies D B = id
    bt_b = [
        [
            _dot([Bmat[r][i] for r in range(8)], [Bmat[r][j] for r in range(8)])
            for j in range(4)
        ]
        for i in range(4)
    ]
    bt = [[Bmat[r][i] for r in range(8)] for i in range(4)]
    Cmat = _solve_matrix(bt_b, bt)
    Dmat = [
        [
            _dot([Cmat[i][r] for r in range(8)], [p3.entry(rr, col) for rr in cols])
            for col in cols
        ]
        for i in range(4)
    ]
    entries = []
    for i in range(4):
        row = []
        for j in range(4):
            total = AlgElem.zero()
            for ri, rkey in enumerate(cols):
                dcoef = Dmat[i][ri]
                if dcoef.is_zero():
                    continue
                for cj, ckey in enumerate(cols):
                    bcoef = Bmat[cj][j]
                    if bcoef.is_zero():
                        continue
                    word = AlgElem.from_scalar(dcoef * bcoef)
                    for t in range(3):
                        word = word * U_MATRIX[rkey[t] - 1][ckey[t] - 1]
                    total = total + word
            row.append(total)
        entries.append(row)
    return Corep(Fraction(3, 2), entries, [[0] * 4 for _ in range(4)])


def _dot(xs, ys):
    total = ZERO
    for x, y in zip(xs, ys):
        if not (x.is_zero() or y.is_zero()):
            total = total + x * y
    return total


def _solve_matrix(lhs, rhs):
    """Solve lhs . X = rhs exactly (lhs square, invertible)."""
    n = len(lhs)
    m = len(rhs[0])
    aug = [list(lhs[i]) + list(rhs[i]) for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if not aug[r][col].is_zero())
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and not aug[r][col].is_zero():
                f = aug[r][col]
                aug[r] = [aug[r][t] - f * aug[col][t] for t in range(n + m)]
    return [row[n:] for row in aug]


QPRIME_SQ = ONE + qpow(-2)  # q'^2 with q' = (1 + q^-2)^(1/2)


def corep_defect(corep: Corep) -> list:
    """Nonzero entries of Delta(w_ij) - sum_k q'^(e_ik+e_kj-e_ij) w_ik (x) w_kj.

    The q'-exponent is always even here, so it folds into the scalar field.
    """
    size = corep.size
    bad = []
    for i in range(size):
        for j in range(size):
            lhs = coproduct(corep.entries[i][j])
            acc: dict = {}
            for k in range(size):
                exponent = corep.qp_parity[i][k] + corep.qp_parity[k][j] - corep.qp_parity[i][j]
                if exponent % 2:
                    raise ArithmeticError("odd q'-exponent in corepresentation product")
                fold = QPRIME_SQ ** (exponent // 2)
                for key1, c1 in corep.entries[i][k].terms.items():
                    for key2, c2 in corep.entries[k][j].terms.items():
                        t = fold * c1 * c2
                        cur = acc.get((key1, key2))
                        acc[(key1, key2)] = t if cur is None else cur + t
            for pair in set(lhs) | set(acc):
                diff = lhs.get(pair, ZERO) - acc.get(pair, ZERO)
                if not diff.is_zero():
                    bad.append((i, j, pair, diff))
    return bad


# --- confluence of the rewriting system ------------------------------------

_REWRITE_RULES = {
    ("b", "a"): {("a", "b"): qpow(-1)},
    ("c", "a"): {("a", "c"): qpow(-1)},
    ("c", "b"): {("b", "c"): ONE},
    ("d", "b"): {("b", "d"): qpow(-1)},
    ("d", "c"): {("c", "d"): qpow(-1)},
    ("d", "a"): {(): ONE, ("b", "c"): qpow(-1)},
    ("a", "d"): {(): ONE, ("b", "c"): qpow(1)},
}


def _reduce_word_at(word: tuple, pos: int) -> dict:
    rule = _REWRITE_RULES[word[pos : pos + 2]]
    return {word[:pos] + mid + word[pos + 2 :]: c for mid, c in rule.items()}


def _distant_ad_reduction(word: tuple):
    """The derived rule a b^l c^m d -> q^(l+m) b^l c^m (1 + q bc).

    The two-letter rules leave a and d stranded once b's or c's sit between
    them; this closes the gap (it is the composite of moving a rightwards
    with the determinant rule, so it adds no new relation).
    """
    for j, letter in enumerate(word):
        if letter != "d":
            continue
        i = max((t for t in range(j) if word[t] == "a"), default=-1)
        if i < 0:
            continue
        between = word[i + 1 : j]
        if any(x not in "bc" for x in between):
            continue
        head, tail = word[:i], word[j + 1 :]
        mid = tuple(sorted(between))
        return {
            head + mid + tail: qpow(len(between)),
            head + mid + ("b", "c") + tail: qpow(len(between) + 1),
        }
    return None


def _word_normal_form(state: dict) -> dict:
    """Exhaustively rewrite a sparse combination of free words."""
    while True:
        target = None
        for word in state:
            for pos in range(len(word) - 1):
                if word[pos : pos + 2] in _REWRITE_RULES:
                    target, replacement = word, _reduce_word_at(word, pos)
                    break
            if target is None:
                distant = _distant_ad_reduction(word)
                if distant is not None:
                    target, replacement = word, distant
            if target:
                break
        if target is None:
            return {w: c for w, c in state.items() if not c.is_zero()}
        coef = state.pop(target)
        for nw, c in replacement.items():
            cur = state.get(nw, ZERO)
            new = cur + coef * c
            if new.is_zero():
                state.pop(nw, None)
            else:
                state[nw] = new


def _word_as_elem(terms: dict) -> AlgElem:
    out = AlgElem.zero()
    for word, c in terms.items():
        out = out + normal_form(word).scale(c)
    return out


_CONFLUENCE_CHECKED: bool | None = None


def check_confluence() -> bool:
    """Resolve all overlap ambiguities of the defining rules both ways.

    Each three-letter overlap word is reduced starting from either redex and
    brought to normal form; the results must agree, and both must match the
    closed-formula product.  The derived long-range a..d rule is exercised by
    seeding it with b's and c's in between.
    """
    global _CONFLUENCE_CHECKED
    if _CONFLUENCE_CHECKED is not None:
        return _CONFLUENCE_CHECKED
    letters = "abcd"
    ok = True
    for x in letters:
        for y in letters:
            for z in letters:
                if (x, y) in _REWRITE_RULES and (y, z) in _REWRITE_RULES:
                    word = (x, y, z)
                    first = _word_normal_form(dict(_reduce_word_at(word, 0)))
                    second = _word_normal_form(dict(_reduce_word_at(word, 1)))
                    if first != second:
                        ok = False
                    if not (_word_as_elem(first) == normal_form(word)):
                        ok = False
    # overlaps of the long-range rule with the two-letter rules
    for mid in ((), ("b",), ("c",), ("b", "c"), ("c", "b"), ("b", "b"), ("c", "c")):
        for pre in ("b", "c", "d"):
            word = (pre, "a") + mid + ("d",)
            if (pre, "a") not in _REWRITE_RULES:
                continue
            first = _word_normal_form(dict(_reduce_word_at(word, 0)))
            second = _word_normal_form(dict(_distant_ad_reduction(word)))
            if first != second or not (_word_as_elem(first) == normal_form(word)):
                ok = False
        for post in ("a", "b", "c"):
            word = ("a",) + mid + ("d", post)
            if ("d", post) not in _REWRITE_RULES:
                continue
            first = _word_normal_form(dict(_reduce_word_at(word, len(mid) + 1)))
            tail = {w + (post,): c for w, c in _distant_ad_reduction(word[:-1]).items()}
            second = _word_normal_form(tail)
            if first != second or not (_word_as_elem(first) == normal_form(word)):
                ok = False
    _CONFLUENCE_CHECKED = ok
    return ok
