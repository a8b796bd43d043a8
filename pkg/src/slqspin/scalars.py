"""Exact scalar arithmetic for the SL_q(2) engine.

Everything downstream (Hopf algebra, tensor kernels, Clifford algebra,
connections) computes over the field

    Q(i)(s, gamma, c1, c2),      s = q^(1/2),

i.e. rational functions in the half-power of the deformation parameter and
three central formal parameters, with Gaussian-rational coefficients.
Values are immutable; all operations are pure and exact.

Internal representation: a fraction num/den of sparse Laurent polynomials.
A polynomial is a dict mapping exponent tuples (e_s, e_gamma, e_c1, e_c2)
to Gaussian-rational coefficients; a coefficient is an int triple
(x, y, d) standing for (x + y*i)/d with d > 0 and gcd(x, y, d) = 1.

The denominator is normalized so that it is a true polynomial (minimal
exponent 0 in every variable), fully cancelled against the numerator, and
monic in the lexicographically largest monomial.  In every computation the
engine actually performs, denominators are a monomial times a univariate
polynomial in s (q-integers, qhat powers, c1/c2 monomials), and for that
shape the cancellation implemented here is complete, so equal values get
identical representations.  Equality nevertheless falls back to exact
cross-multiplication, so correctness never depends on the reduced form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

# ---------------------------------------------------------------------------
# Gaussian-rational coefficients: triples (x, y, d) == (x + y*i)/d
# ---------------------------------------------------------------------------

GQ_ZERO = (0, 0, 1)
GQ_ONE = (1, 0, 1)


def gq_make(x: int, y: int, d: int):
    if d < 0:
        x, y, d = -x, -y, -d
    g = gcd(gcd(x, y), d)
    if g > 1:
        return (x // g, y // g, d // g)
    return (x, y, d)


def gq_add(a, b):
    x1, y1, d1 = a
    x2, y2, d2 = b
    if d1 == d2 == 1:
        return (x1 + x2, y1 + y2, 1)
    return gq_make(x1 * d2 + x2 * d1, y1 * d2 + y2 * d1, d1 * d2)


def gq_mul(a, b):
    x1, y1, d1 = a
    x2, y2, d2 = b
    if y1 == 0 and y2 == 0:
        if d1 == d2 == 1:
            return (x1 * x2, 0, 1)
        return gq_make(x1 * x2, 0, d1 * d2)
    return gq_make(x1 * x2 - y1 * y2, x1 * y2 + y1 * x2, d1 * d2)


def gq_neg(a):
    return (-a[0], -a[1], a[2])


def gq_inv(a):
    x, y, d = a
    if x == 0 and y == 0:
        raise ZeroDivisionError("inverse of zero Gaussian rational")
    n = x * x + y * y
    return gq_make(d * x, -d * y, n)


def gq_conj(a):
    return (a[0], -a[1], a[2])


def gq_from_fraction(f: Fraction):
    return gq_make(f.numerator, 0, f.denominator)


# ---------------------------------------------------------------------------
# Sparse Laurent polynomials: dict {(e_s, e_g, e_c1, e_c2): gq}
# ---------------------------------------------------------------------------

MONO_ONE = (0, 0, 0, 0)
P_ZERO: dict = {}
P_ONE = {MONO_ONE: GQ_ONE}


def p_add_into(acc: dict, p: dict, factor=None) -> None:
    """acc += factor * p, in place."""
    for m, c in p.items():
        if factor is not None:
            c = gq_mul(factor, c)
        old = acc.get(m)
        if old is None:
            acc[m] = c
        else:
            new = gq_add(old, c)
            if new[0] == 0 and new[1] == 0:
                del acc[m]
            else:
                acc[m] = new


def p_add(p: dict, r: dict) -> dict:
    out = dict(p)
    p_add_into(out, r)
    return out


def p_neg(p: dict) -> dict:
    return {m: gq_neg(c) for m, c in p.items()}


def p_mul(p: dict, r: dict) -> dict:
    if not p or not r:
        return {}
    if len(p) > len(r):
        p, r = r, p
    out: dict = {}
    for (a1, a2, a3, a4), c1 in p.items():
        for (b1, b2, b3, b4), c2 in r.items():
            m = (a1 + b1, a2 + b2, a3 + b3, a4 + b4)
            c = gq_mul(c1, c2)
            old = out.get(m)
            if old is None:
                out[m] = c
            else:
                new = gq_add(old, c)
                if new[0] == 0 and new[1] == 0:
                    del out[m]
                else:
                    out[m] = new
    return out


def p_scale(p: dict, c) -> dict:
    if c[0] == 0 and c[1] == 0:
        return {}
    return {m: gq_mul(c, v) for m, v in p.items()}


def p_mono_shift(p: dict, shift) -> dict:
    s1, s2, s3, s4 = shift
    if not (s1 or s2 or s3 or s4):
        return p
    return {(m[0] + s1, m[1] + s2, m[2] + s3, m[3] + s4): c for m, c in p.items()}


# ---------------------------------------------------------------------------
# Univariate helpers (dense lists over gq), used for GCD cancellation in s
# ---------------------------------------------------------------------------


def _uni_trim(u: list) -> list:
    while u and u[-1][0] == 0 and u[-1][1] == 0:
        u.pop()
    return u


def _uni_monic(u: list) -> list:
    lead = u[-1]
    if lead == GQ_ONE:
        return u
    inv = gq_inv(lead)
    return [gq_mul(inv, c) for c in u]


def _uni_rem(a: list, b: list) -> list:
    """Remainder of a by monic b (both dense coefficient lists)."""
    a = list(a)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        coeff = a[-1]
        shift = len(a) - 1 - db
        for k in range(db + 1):
            t = gq_mul(coeff, b[k])
            a[shift + k] = gq_add(a[shift + k], gq_neg(t))
        _uni_trim(a)
    return a


def _uni_gcd(a: list, b: list) -> list:
    a = _uni_trim(list(a))
    b = _uni_trim(list(b))
    while b:
        b = _uni_monic(b)
        a, b = b, _uni_rem(a, b)
    return _uni_monic(a) if a else a


def _uni_quo(a: list, b: list) -> list:
    """Exact quotient of a by monic b."""
    a = list(a)
    db = len(b) - 1
    out = [GQ_ZERO] * (len(a) - db)
    while a and len(a) - 1 >= db:
        coeff = a[-1]
        shift = len(a) - 1 - db
        out[shift] = coeff
        for k in range(db + 1):
            t = gq_mul(coeff, b[k])
            a[shift + k] = gq_add(a[shift + k], gq_neg(t))
        _uni_trim(a)
    if a:
        raise ArithmeticError("non-exact univariate division")
    return out


# ---------------------------------------------------------------------------
# ScalarQ
# ---------------------------------------------------------------------------


class ScalarQ:
    """Element of Q(i)(s, gamma, c1, c2), canonically reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num: dict, den: dict | None = None, _normalized: bool = False):
        if den is None:
            den = P_ONE
        if not _normalized:
            num, den = _normalize(num, den)
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "ScalarQ":
        if n == 0:
            return ZERO
        return ScalarQ({MONO_ONE: (n, 0, 1)}, P_ONE, _normalized=True)

    @staticmethod
    def from_fraction(f) -> "ScalarQ":
        f = Fraction(f)
        if f == 0:
            return ZERO
        return ScalarQ({MONO_ONE: gq_from_fraction(f)}, P_ONE, _normalized=True)

    @staticmethod
    def s_power(k: int) -> "ScalarQ":
        """s^k = q^(k/2)."""
        return ScalarQ({(k, 0, 0, 0): GQ_ONE}, P_ONE, _normalized=True)

    @staticmethod
    def q_power(k: int) -> "ScalarQ":
        return ScalarQ.s_power(2 * k)

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        if self.den == other.den:
            return ScalarQ(p_add(self.num, other.num), self.den)
        num = p_add(p_mul(self.num, other.den), p_mul(other.num, self.den))
        return ScalarQ(num, p_mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return ScalarQ(p_neg(self.num), self.den, _normalized=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        num = p_mul(self.num, other.num)
        if self.den is P_ONE and other.den is P_ONE:
            return ScalarQ(num, P_ONE, _normalized=True)
        return ScalarQ(num, p_mul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero ScalarQ")
        if not self.num:
            return ZERO
        return ScalarQ(p_mul(self.num, other.den), p_mul(self.den, other.num))

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k == 0:
            return ONE
        if k < 0:
            return (ONE / self) ** (-k)
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return p_mul(self.num, other.den) == p_mul(other.num, self.den)

    def __bool__(self):
        return bool(self.num)

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == P_ONE and self.den == P_ONE

    # -- structure ----------------------------------------------------------

    def uses_params(self):
        """Set of formal parameters ('gamma', 'c1', 'c2', 'i') occurring."""
        used = set()
        for part in (self.num, self.den):
            for (es, eg, e1, e2), c in part.items():
                if eg:
                    used.add("gamma")
                if e1:
                    used.add("c1")
                if e2:
                    used.add("c2")
                if c[1]:
                    used.add("i")
        return used

    def conj(self, regime: "ConjRegime") -> "ScalarQ":
        """Antilinear field antiautomorphism for the declared regime."""
        return ScalarQ(regime.conj_poly(self.num), regime.conj_poly(self.den))

    def eval_numeric(self, q_value, params: dict | None = None):
        """Exact evaluation at a rational q > 0; returns a QNum (A + B*sqrt(q)).

        params may supply QNum (or Fraction/int) values for gamma, c1, c2.
        Raises ZeroDivisionError naming the denominator when it vanishes.
        """
        q = Fraction(q_value)
        params = params or {}
        den_val = _p_eval(self.den, q, params)
        if den_val.is_zero():
            raise ZeroDivisionError(
                "denominator %s vanishes at q = %s" % (render(ScalarQ(self.den)), q)
            )
        return _p_eval(self.num, q, params) / den_val

    def __repr__(self):
        return "ScalarQ(%s)" % render(self)

    __hash__ = None  # mutable-free but not hashable: equality is value-based


def _coerce(x):
    if isinstance(x, ScalarQ):
        return x
    if isinstance(x, int):
        return ScalarQ.from_int(x)
    if isinstance(x, Fraction):
        return ScalarQ.from_fraction(x)
    return None


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


def _normalize(num: dict, den: dict):
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return {}, P_ONE
    if den == P_ONE:
        return num, P_ONE

    # shift den to a true polynomial with min exponent 0 per variable
    mins = [min(m[k] for m in den) for k in range(4)]
    if any(mins):
        shift = tuple(-v for v in mins)
        den = p_mono_shift(den, shift)
        num = p_mono_shift(num, shift)

    if len(den) == 1:
        # monomial denominator: fold into the numerator
        m, c = next(iter(den.items()))
        inv = gq_inv(c)
        num = p_mono_shift(p_scale(num, inv), tuple(-e for e in m))
        return num, P_ONE

    # univariate-in-s cancellation when the denominator allows it
    den_tail = {m[1:] for m in den}
    if den_tail == {(0, 0, 0)}:
        num, den = _cancel_uni_s(num, den)
        if den == P_ONE:
            return num, P_ONE

    # monic denominator in the lexicographically largest monomial
    lead = max(den)
    lc = den[lead]
    if lc != GQ_ONE:
        inv = gq_inv(lc)
        den = p_scale(den, inv)
        num = p_scale(num, inv)
    return num, den


def _cancel_uni_s(num: dict, den: dict):
    """Cancel the gcd in s between num and a univariate-in-s denominator."""
    den_deg = max(m[0] for m in den)
    den_list = [GQ_ZERO] * (den_deg + 1)
    for m, c in den.items():
        den_list[m[0]] = c

    # group the numerator by non-s exponents; each group is Laurent in s
    groups: dict = {}
    for m, c in num.items():
        groups.setdefault(m[1:], []).append((m[0], c))

    g = den_list
    shifted = []
    for tail, terms in groups.items():
        lo = min(e for e, _ in terms)
        hi = max(e for e, _ in terms)
        u = [GQ_ZERO] * (hi - lo + 1)
        for e, c in terms:
            u[e - lo] = c
        shifted.append((tail, lo, u))
        g = _uni_gcd(g, u)
        if len(g) <= 1:
            return num, den

    den_q = _uni_quo(den_list, g)
    new_num: dict = {}
    for tail, lo, u in shifted:
        uq = _uni_quo(u, g)
        for e, c in enumerate(uq):
            if c[0] or c[1]:
                new_num[(lo + e,) + tail] = c
    new_den = {(e, 0, 0, 0): c for e, c in enumerate(den_q) if c[0] or c[1]}
    if len(new_den) == 1 and (0, 0, 0, 0) in new_den:
        c = new_den[(0, 0, 0, 0)]
        if c != GQ_ONE:
            new_num = p_scale(new_num, gq_inv(c))
        return new_num, P_ONE
    return new_num, new_den


# ---------------------------------------------------------------------------
# Named values
# ---------------------------------------------------------------------------

ZERO = ScalarQ({}, P_ONE, _normalized=True)
ONE = ScalarQ(dict(P_ONE), P_ONE, _normalized=True)
S = ScalarQ.s_power(1)
Q = ScalarQ.s_power(2)
I = ScalarQ({MONO_ONE: (0, 1, 1)}, P_ONE, _normalized=True)
GAMMA = ScalarQ({(0, 1, 0, 0): GQ_ONE}, P_ONE, _normalized=True)
C1 = ScalarQ({(0, 0, 1, 0): GQ_ONE}, P_ONE, _normalized=True)
C2 = ScalarQ({(0, 0, 0, 1): GQ_ONE}, P_ONE, _normalized=True)
QHAT = Q - Q ** -1


def qint(n: int) -> ScalarQ:
    """The q-integer [n] = (q^n - q^-n)/(q - q^-1)."""
    if n == 0:
        return ZERO
    if n < 0:
        return -qint(-n)
    return ScalarQ(
        {(2 * (n - 1 - 2 * j), 0, 0, 0): GQ_ONE for j in range(n)}, P_ONE,
        _normalized=True,
    )


def spow(k: int) -> ScalarQ:
    return ScalarQ.s_power(k)


def qpow(k: int) -> ScalarQ:
    return ScalarQ.s_power(2 * k)


# ---------------------------------------------------------------------------
# Conjugation regimes
# ---------------------------------------------------------------------------


class ConjRegime:
    """Conjugation data: regime kind plus the declared rule for gamma.

    kind REAL: conj(s) = s;  kind UNIT: conj(s) = s^-1.  Both send i to -i.
    gamma_rule is one of
        "self"            conj(gamma) = gamma
        "minus"           conj(gamma) = -gamma
        ("twist", k, nu)  conj(gamma) = nu * s^k * gamma   (UNIT only)
    c1 and c2 are always self-conjugate.
    """

    __slots__ = ("kind", "gamma_rule")

    def __init__(self, kind: str, gamma_rule="self"):
        if kind not in ("REAL", "UNIT"):
            raise ValueError("unknown regime kind %r" % kind)
        if isinstance(gamma_rule, tuple):
            if gamma_rule[0] != "twist" or len(gamma_rule) != 3:
                raise ValueError("bad gamma rule %r" % (gamma_rule,))
            if kind != "UNIT":
                raise ValueError("twisted gamma conjugation needs the UNIT regime")
            if gamma_rule[2] not in (1, -1):
                raise ValueError("twist sign must be +-1")
        elif gamma_rule not in ("self", "minus"):
            raise ValueError("bad gamma rule %r" % (gamma_rule,))
        self.kind = kind
        self.gamma_rule = gamma_rule

    def conj_poly(self, p: dict) -> dict:
        out: dict = {}
        unit = self.kind == "UNIT"
        rule = self.gamma_rule
        for (es, eg, e1, e2), (x, y, d) in p.items():
            c = (x, -y, d)
            ns = -es if unit else es
            if eg and rule != "self":
                if rule == "minus":
                    if eg % 2:
                        c = gq_neg(c)
                else:
                    _, k, nu = rule
                    ns += k * eg
                    if nu < 0 and eg % 2:
                        c = gq_neg(c)
            m = (ns, eg, e1, e2)
            old = out.get(m)
            if old is None:
                out[m] = c
            else:
                newc = gq_add(old, c)
                if newc[0] == 0 and newc[1] == 0:
                    del out[m]
                else:
                    out[m] = newc
        return out

    def conj(self, x: ScalarQ) -> ScalarQ:
        return x.conj(self)

    def __repr__(self):
        return "ConjRegime(%r, %r)" % (self.kind, self.gamma_rule)


REAL = ConjRegime("REAL")
UNIT = ConjRegime("UNIT")


# ---------------------------------------------------------------------------
# Exact numeric values A + B*sqrt(q), A and B Gaussian rationals
# ---------------------------------------------------------------------------


class QNum:
    """Element of Q(i)[sqrt(q)] for a fixed rational q."""

    __slots__ = ("q", "a", "b")

    def __init__(self, q: Fraction, a=None, b=None):
        self.q = Fraction(q)
        self.a = a if a is not None else (Fraction(0), Fraction(0))
        self.b = b if b is not None else (Fraction(0), Fraction(0))

    @staticmethod
    def from_rational(q, value) -> "QNum":
        return QNum(q, (Fraction(value), Fraction(0)))

    def is_zero(self) -> bool:
        return self.a == (0, 0) and self.b == (0, 0)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QNum.from_rational(self.q, other)
        return QNum(
            self.q,
            (self.a[0] + other.a[0], self.a[1] + other.a[1]),
            (self.b[0] + other.b[0], self.b[1] + other.b[1]),
        )

    def __neg__(self):
        return QNum(self.q, (-self.a[0], -self.a[1]), (-self.b[0], -self.b[1]))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QNum.from_rational(self.q, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QNum.from_rational(self.q, other)
        a1, a2 = self.a, self.b
        b1, b2 = other.a, other.b
        q = self.q

        def cmul(u, v):
            return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])

        def cadd(u, v):
            return (u[0] + v[0], u[1] + v[1])

        def cscale(u, f):
            return (u[0] * f, u[1] * f)

        ra = cadd(cmul(a1, b1), cscale(cmul(a2, b2), q))
        rb = cadd(cmul(a1, b2), cmul(a2, b1))
        return QNum(q, ra, rb)

    def inv(self) -> "QNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero QNum")
        # 1/(A + B r) = (A - B r)/(A^2 - q B^2), r = sqrt(q)
        conj = QNum(self.q, self.a, (-self.b[0], -self.b[1]))
        norm = self * conj  # rational + 0*sqrt(q) component may remain complex
        # norm = N + 0*sqrt(q) with N Gaussian rational
        assert norm.b == (0, 0)
        nre, nim = norm.a
        d = nre * nre + nim * nim
        ninv = (nre / d, -nim / d)

        def cmul(u, v):
            return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])

        return QNum(self.q, cmul(conj.a, ninv), cmul(conj.b, ninv))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QNum.from_rational(self.q, other)
        return self * other.inv()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QNum.from_rational(self.q, other)
        return self.q == other.q and self.a == other.a and self.b == other.b

    def as_rational(self):
        """Return the value as a Fraction if it is real rational, else None."""
        if self.b == (0, 0) and self.a[1] == 0:
            return self.a[0]
        return None

    def __repr__(self):
        parts = []
        if self.a != (0, 0):
            parts.append(_fmt_gauss(self.a))
        if self.b != (0, 0):
            parts.append("(%s)*sqrt(%s)" % (_fmt_gauss(self.b), self.q))
        return " + ".join(parts) if parts else "0"

    __hash__ = None


def _fmt_gauss(u):
    re, im = u
    if im == 0:
        return str(re)
    if re == 0:
        return "%s*i" % im
    return "(%s + %s*i)" % (re, im)


def _p_eval(p: dict, q: Fraction, params: dict) -> QNum:
    def param_val(name):
        v = params.get(name)
        if v is None:
            raise ValueError("no numeric value declared for parameter %r" % name)
        if isinstance(v, QNum):
            return v
        return QNum.from_rational(q, v)

    total = QNum(q)
    cache = {}
    for (es, eg, e1, e2), (x, y, d) in p.items():
        k, r = divmod(es, 2)
        a = (Fraction(x, d), Fraction(y, d))
        term = QNum(q, a) if r == 0 else QNum(q, (Fraction(0), Fraction(0)), a)
        if k:
            term = term * (q ** k)
        for name, e in (("gamma", eg), ("c1", e1), ("c2", e2)):
            if e:
                if (name, e) not in cache:
                    base = param_val(name)
                    acc = base
                    for _ in range(abs(e) - 1):
                        acc = acc * base
                    cache[(name, e)] = acc.inv() if e < 0 else acc
                term = term * cache[(name, e)]
        total = total + term
    return total


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _render_mono(m, c) -> str:
    es, eg, e1, e2 = m
    factors = []
    x, y, d = c
    if y == 0:
        coeff = x if d == 1 else Fraction(x, d)
        if coeff == -1 and (es or eg or e1 or e2):
            factors.append("-")
        elif coeff != 1 or not (es or eg or e1 or e2):
            factors.append(str(coeff))
    else:
        if x == 0:
            im = Fraction(y, d)
            if im == 1:
                factors.append("i")
            elif im == -1:
                factors.append("-i")
            else:
                factors.append("%s*i" % im)
        else:
            factors.append("(%s + %s*i)" % (Fraction(x, d), Fraction(y, d)))
    if es:
        if es % 2 == 0:
            k = es // 2
            factors.append("q" if k == 1 else "q^(%d)" % k)
        else:
            factors.append("q^(%d/2)" % es)
    for name, e in (("gamma", eg), ("c1", e1), ("c2", e2)):
        for _ in range(abs(e)):
            factors.append(name if e > 0 else "1/%s" % name)
    joined = ""
    for f in factors:
        if f == "-":
            joined = "-"
        elif not joined or joined == "-":
            joined += f
        else:
            joined += "*" + f
    return joined or "1"


def _render_poly(p: dict) -> str:
    if not p:
        return "0"
    terms = []
    for m in sorted(p, reverse=True):
        t = _render_mono(m, p[m])
        if terms and not t.startswith("-"):
            terms.append("+ " + t)
        elif terms:
            terms.append("- " + t[1:])
        else:
            terms.append(t)
    return " ".join(terms)


def render(x: ScalarQ) -> str:
    num = _render_poly(x.num)
    if x.den == P_ONE:
        return num
    den = _render_poly(x.den)
    if len(x.num) > 1:
        num = "(%s)" % num
    return "%s / (%s)" % (num, den)


# ---------------------------------------------------------------------------
# Parsing (shared scalar sub-grammar of the CLI expression language)
# ---------------------------------------------------------------------------

import re

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<qpow>q\^\(\s*-?\d+\s*(?:/\s*2\s*)?\))"
    r"|(?P<qint>\[\s*-?\d+\s*\])"
    r"|(?P<num>\d+)"
    r"|(?P<name>qhat|gamma|c1|c2|q|i)"
    r"|(?P<op>[+\-*/()])"
    r"|(?P<uminus>[−])"
    r")"
)


def tokenize_scalar(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:].strip()
            if not rest:
                break
            raise ValueError("cannot tokenize scalar input at %r" % rest[:20])
        pos = m.end()
        if m.lastgroup == "uminus":
            out.append(("op", "-"))
        else:
            out.append((m.lastgroup, m.group(m.lastgroup)))
    return out


class _ScalarParser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> ScalarQ:
        v = self.expr()
        if self.pos != len(self.tokens):
            raise ValueError("trailing input in scalar expression")
        return v

    def expr(self) -> ScalarQ:
        v = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self) -> ScalarQ:
        v = self.factor()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            w = self.factor()
            v = v * w if op == "*" else v / w
        return v

    def factor(self) -> ScalarQ:
        kind, val = self.peek()
        if (kind, val) == ("op", "-"):
            self.take()
            return -self.factor()
        if (kind, val) == ("op", "("):
            self.take()
            v = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis in scalar expression")
            return v
        self.take()
        if kind == "num":
            return ScalarQ.from_int(int(val))
        if kind == "qpow":
            inner = val[3:-1].replace(" ", "")
            if inner.endswith("/2"):
                return spow(int(inner[:-2]))
            return qpow(int(inner))
        if kind == "qint":
            return qint(int(val[1:-1]))
        if kind == "name":
            return {
                "q": Q,
                "qhat": QHAT,
                "gamma": GAMMA,
                "c1": C1,
                "c2": C2,
                "i": I,
            }[val]
        raise ValueError("unexpected token %r in scalar expression" % (val,))


def parse_scalar(text: str) -> ScalarQ:
    """Parse the scalar grammar: q, q^(k/2), qhat, [n], c1, c2, gamma, i,
    integers, + - * / and parentheses."""
    return _ScalarParser(tokenize_scalar(text)).parse()
