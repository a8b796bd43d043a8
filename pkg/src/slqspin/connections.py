"""Left connections on the calculus and on spinors, and the Dirac operator.

Because the differential is inner, every left connection on a covariant
bimodule has the shape nabla(rho) = theta (x) rho - tau(rho (x) theta) for
a bimodule homomorphism tau.  On one-forms the admissible tau form the
eight braidings nu * sigma_tilde(i); on spinors each braiding admits a
one-parameter family with a free central parameter gamma.  This module
builds those connections, the metric dual of the spinor connection, the
Dirac operator and the connection Laplacian, all with exact coefficients.
"""

from __future__ import annotations

import json

from functools import lru_cache

from .scalars import (
    C1,
    GAMMA,
    ONE,
    QHAT,
    ZERO,
    ConjRegime,
    ScalarQ,
    parse_scalar,
    qint,
    qpow,
    render,
    spow,
)
from .hopf import AlgElem, _coerce_alg
from .dualfunc import (
    INDEX_PAIRS,
    DualElem,
    convolve_right,
    f_matrix,
    ftilde_matrix,
    tangent_basis,
)
from .tensors import (
    CUP_VALUES,
    SIGMA_TILDE_SIGNS,
    TensorOp,
    braiding_sigma,
    metric_g,
    rhat_power,
    sigma_tilde,
)
from .forms import FormElem, _calc_tag, differential, theta_form, theta_star_table
from .clifford import (
    PSI_INDEX,
    SpinorElem,
    _acc,
    _acc_alg,
    _nullspace,
    spinor_metric_matrix,
    theta_action_table,
)


# coefficients of the biinvariant form theta in the theta_ij basis
_TH = {(1, 2): ONE / QHAT, (2, 1): -(qpow(1) / QHAT)}


# ---------------------------------------------------------------------------
# Tensor-square elements with coefficients pulled left
# ---------------------------------------------------------------------------


class FormFormElem:
    """Element of Gamma (x)_A Gamma; keys ((i,j),(k,l)) with left coefficients."""

    __slots__ = ("terms", "calculus")

    def __init__(self, terms: dict | None = None, calculus="+"):
        self.calculus = _calc_tag(calculus)
        self.terms = {}
        if terms:
            for key, a in terms.items():
                if not a.is_zero():
                    self.terms[key] = a

    @staticmethod
    def zero(calculus="+") -> "FormFormElem":
        return FormFormElem(None, calculus)

    def _check(self, other):
        if self.calculus != other.calculus:
            raise ValueError("cannot mix the two calculi")

    def __add__(self, other):
        if not isinstance(other, FormFormElem):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for key, a in other.terms.items():
            cur = terms.get(key)
            new = a if cur is None else cur + a
            if new.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = new
        out = FormFormElem(None, self.calculus)
        out.terms = terms
        return out

    def __sub__(self, other):
        if not isinstance(other, FormFormElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = FormFormElem(None, self.calculus)
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        # right multiplication: move x through the second leg, then shift the
        # emerging coefficient through the first leg
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        fm = f_matrix(self.calculus)
        out = FormFormElem.zero(self.calculus)
        for (ij, kl), a in self.terms.items():
            for mn in INDEX_PAIRS:
                moved = convolve_right(fm[(kl, mn)], x)
                if moved.is_zero():
                    continue
                shifted = FormElem({ij: a}, self.calculus) * moved
                for ij2, b in shifted.coeffs.items():
                    _acc_alg(out.terms, (ij2, mn), b)
        return out

    def __rmul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        out = FormFormElem(None, self.calculus)
        for key, v in self.terms.items():
            prod = x * v
            if not prod.is_zero():
                out.terms[key] = prod
        return out

    def scale(self, c: ScalarQ) -> "FormFormElem":
        out = FormFormElem(None, self.calculus)
        if not c.is_zero():
            out.terms = {k: v.scale(c) for k, v in self.terms.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, FormFormElem):
            return NotImplemented
        if self.calculus != other.calculus:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[k] == v for k, v in self.terms.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (ij, kl), a in sorted(self.terms.items()):
            bits.append(
                "(%r)*th%d%d(x)th%d%d" % (a, ij[0], ij[1], kl[0], kl[1])
            )
        return " + ".join(bits)


class FormSpinorElem:
    """Element of Gamma (x)_A S0; keys ((i,j),(eta,k)) with left coefficients."""

    __slots__ = ("terms", "calculus")

    def __init__(self, terms: dict | None = None, calculus="+"):
        self.calculus = _calc_tag(calculus)
        self.terms = {}
        if terms:
            for key, a in terms.items():
                if not a.is_zero():
                    self.terms[key] = a

    @staticmethod
    def zero(calculus="+") -> "FormSpinorElem":
        return FormSpinorElem(None, calculus)

    def _check(self, other):
        if self.calculus != other.calculus:
            raise ValueError("cannot mix the two calculi")

    def __add__(self, other):
        if not isinstance(other, FormSpinorElem):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for key, a in other.terms.items():
            cur = terms.get(key)
            new = a if cur is None else cur + a
            if new.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = new
        out = FormSpinorElem(None, self.calculus)
        out.terms = terms
        return out

    def __sub__(self, other):
        if not isinstance(other, FormSpinorElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        out = FormSpinorElem(None, self.calculus)
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __mul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        ft = ftilde_matrix(self.calculus)
        out = FormSpinorElem.zero(self.calculus)
        for (ij, label), a in self.terms.items():
            row = PSI_INDEX.index(label)
            for col in range(4):
                f = ft[row][col]
                if f.is_zero():
                    continue
                moved = convolve_right(f, x)
                if moved.is_zero():
                    continue
                shifted = FormElem({ij: a}, self.calculus) * moved
                for ij2, b in shifted.coeffs.items():
                    _acc_alg(out.terms, (ij2, PSI_INDEX[col]), b)
        return out

    def __rmul__(self, other):
        x = _coerce_alg(other)
        if x is None:
            return NotImplemented
        out = FormSpinorElem(None, self.calculus)
        for key, v in self.terms.items():
            prod = x * v
            if not prod.is_zero():
                out.terms[key] = prod
        return out

    def scale(self, c: ScalarQ) -> "FormSpinorElem":
        out = FormSpinorElem(None, self.calculus)
        if not c.is_zero():
            out.terms = {k: v.scale(c) for k, v in self.terms.items()}
        return out

    def __eq__(self, other):
        if not isinstance(other, FormSpinorElem):
            return NotImplemented
        if self.calculus != other.calculus:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(other.terms[k] == v for k, v in self.terms.items())

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for (ij, label), a in sorted(self.terms.items()):
            bits.append(
                "(%r)*th%d%d(x)psi(%d,%d)" % (a, ij[0], ij[1], label[0], label[1])
            )
        return " + ".join(bits)


def tensor_form_form(w1: FormElem, w2: FormElem) -> FormFormElem:
    """w1 (x)_A w2 with the coefficients of w2 moved through w1."""
    out = FormFormElem.zero(w1.calculus)
    for kl, b in w2.coeffs.items():
        moved = w1 * b
        for ij, a in moved.coeffs.items():
            _acc_alg(out.terms, (ij, kl), a)
    return out


def tensor_form_spinor(w: FormElem, psi: SpinorElem) -> FormSpinorElem:
    """w (x)_A psi with the coefficients of psi moved through w."""
    out = FormSpinorElem.zero(w.calculus)
    for label, b in psi.coeffs.items():
        moved = w * b
        for ij, a in moved.coeffs.items():
            _acc_alg(out.terms, (ij, label), a)
    return out


# ---------------------------------------------------------------------------
# The braided connections on one-forms
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def clifford_compatible(variant: int, nu: int = 1) -> bool:
    """Braid relation with sigma and invariance of the symmetric metric.

    These two conditions single out the braidings that extend from the
    one-form bimodule to a connection on the whole Clifford algebra.
    """
    st = sigma_tilde(variant, nu)
    sig = braiding_sigma()
    st12 = st.lift(0, 6)
    st23 = st.lift(2, 6)
    lhs = sig.lift(2, 6).compose(st12).compose(st23)
    rhs = st12.compose(st23).compose(sig.lift(0, 6))
    if not lhs == rhs:
        return False
    g = metric_g()
    g23 = TensorOp.identity(2).tensor(g)
    g12 = g.tensor(TensorOp.identity(2))
    return g23.compose(st12).compose(st23) == g12


class ConnSpec:
    """Connection data: braiding variant 1..4, sign nu, calculus, and the
    central parameter gamma together with its declared conjugation rule.

    The regime is only needed for questions that conjugate gamma (the
    metric dual, symmetry of the Dirac operator, the Laplacian).
    """

    __slots__ = ("variant", "nu", "calculus", "gamma", "c1", "regime", "_cache")

    def __init__(self, variant, nu=1, calculus="+", gamma=None, c1=None, regime=None):
        if variant not in (1, 2, 3, 4):
            raise ValueError("variant must be one of 1, 2, 3, 4")
        if nu not in (1, -1):
            raise ValueError("nu must be +1 or -1")
        if calculus not in ("+", "-"):
            raise ValueError("calculus must be '+' or '-'")
        if regime is not None and not isinstance(regime, ConjRegime):
            raise ValueError("regime must be a ConjRegime")
        self.variant = variant
        self.nu = nu
        self.calculus = calculus
        self.gamma = GAMMA if gamma is None else gamma
        self.c1 = C1 if c1 is None else c1
        self.regime = regime
        self._cache = {}
        if not clifford_compatible(variant, nu):
            raise ValueError("braiding is not compatible with the Clifford algebra")

    @property
    def eta(self) -> int:
        return SIGMA_TILDE_SIGNS[self.variant][0]

    @property
    def etap(self) -> int:
        return SIGMA_TILDE_SIGNS[self.variant][1]

    def sigma_op(self) -> TensorOp:
        return sigma_tilde(self.variant, self.nu)

    def gamma_bar(self) -> ScalarQ:
        if self.regime is None:
            raise ValueError("gamma has no declared conjugation rule")
        return self.gamma.conj(self.regime)

    def to_json(self) -> str:
        data = {
            "variant": self.variant,
            "nu": "+" if self.nu > 0 else "-",
            "calculus": self.calculus,
            "gamma": render(self.gamma),
            "c1": render(self.c1),
        }
        if self.regime is not None:
            rule = self.regime.gamma_rule
            data["regime"] = {
                "kind": self.regime.kind,
                "gamma": list(rule) if isinstance(rule, tuple) else rule,
            }
        return json.dumps(data)

    @staticmethod
    def from_json(text: str) -> "ConnSpec":
        data = json.loads(text)
        nu = data.get("nu", "+")
        nu = 1 if nu in (1, "+") else -1
        regime = None
        if "regime" in data:
            rd = data["regime"]
            rule = rd.get("gamma", "self")
            if isinstance(rule, list):
                rule = (rule[0], int(rule[1]), int(rule[2]))
            regime = ConjRegime(rd["kind"], rule)
        return ConnSpec(
            int(data["variant"]),
            nu=nu,
            calculus=data.get("calculus", "+"),
            gamma=parse_scalar(data["gamma"]) if "gamma" in data else None,
            c1=parse_scalar(data["c1"]) if "c1" in data else None,
            regime=regime,
        )

    def __repr__(self):
        return "ConnSpec(variant=%d, nu=%+d, calculus=%r)" % (
            self.variant,
            self.nu,
            self.calculus,
        )


def sigma_apply(spec: ConnSpec, w1: FormElem, w2: FormElem) -> FormFormElem:
    """The braiding of the connection applied to w1 (x)_A w2."""
    st = spec.sigma_op()
    out = FormFormElem.zero(spec.calculus)
    for kl, b in w2.coeffs.items():
        moved = w1 * b
        for ij, a in moved.coeffs.items():
            col = ij + kl
            for (o, i), v in st.data.items():
                if i != col:
                    continue
                _acc_alg(out.terms, (o[:2], o[2:]), a.scale(v))
    return out


def gamma_conn_table(spec: ConnSpec) -> dict:
    """nabla on the one-form basis: {ij: {((k,l),(m,n)): ScalarQ}}."""
    key = "gamma_conn"
    if key not in spec._cache:
        st = spec.sigma_op()
        tbl = {}
        for ij in INDEX_PAIRS:
            row: dict = {}
            for kl, c in _TH.items():
                _acc(row, (kl, ij), c)
                col = ij + kl
                for (o, i), v in st.data.items():
                    if i != col:
                        continue
                    _acc(row, (o[:2], o[2:]), -(c * v))
            tbl[ij] = {k: v for k, v in row.items() if not v.is_zero()}
        spec._cache[key] = tbl
    return spec._cache[key]


def nabla_gamma(spec: ConnSpec, w: FormElem) -> FormFormElem:
    """The braided left connection on one-forms."""
    if w.calculus != spec.calculus:
        raise ValueError("cannot mix the two calculi")
    tbl = gamma_conn_table(spec)
    out = FormFormElem.zero(spec.calculus)
    for ij, a in w.coeffs.items():
        da = differential(a, spec.calculus)
        for kl, b in da.coeffs.items():
            _acc_alg(out.terms, (kl, ij), b)
        for key2, v in tbl[ij].items():
            _acc_alg(out.terms, key2, a.scale(v))
    return FormFormElem(out.terms, spec.calculus)


# ---------------------------------------------------------------------------
# Torsion, represented inside the tensor square
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def wedge_kernel_stable() -> bool:
    """ker(id - sigma) = ker(id - sigma)^2 on the tensor square.

    This lets im(id - sigma) stand in for the degree-two part of the
    exterior algebra, so wedge vanishing can be tested by one application
    of id - sigma.
    """
    p = TensorOp.identity(4) - braiding_sigma()
    return p.rank() == p.compose(p).rank()


def apply_wedge_rep(elem: FormFormElem) -> FormFormElem:
    """(id - sigma) on the invariant legs; zero exactly on wedge kernels."""
    sig = braiding_sigma()
    out = FormFormElem.zero(elem.calculus)
    for (ij, kl), a in elem.terms.items():
        _acc_alg(out.terms, (ij, kl), a)
        col = ij + kl
        for (o, i), v in sig.data.items():
            if i != col:
                continue
            _acc_alg(out.terms, (o[:2], o[2:]), -a.scale(v))
    return FormFormElem(out.terms, elem.calculus)


def torsion_rep(spec: ConnSpec, w: FormElem) -> FormFormElem:
    """Representative of the torsion of the braided connection.

    T(w) = wedge(nabla w) - dw with dw = theta ^ w + w ^ theta; the result
    is (id - sigma) of the tensor-square pre-image and vanishes exactly
    when the torsion does.
    """
    th = theta_form(spec.calculus)
    x = nabla_gamma(spec, w) - tensor_form_form(th, w) - tensor_form_form(w, th)
    return apply_wedge_rep(x)


def torsion_factorizations() -> tuple:
    """(id-sigma)(id + q sigma_tilde(1)) and
    (id-sigma)(id + q^-2 sigma_tilde(2))(id + q^2 sigma_tilde(2)),
    both of which vanish identically."""
    one = TensorOp.identity(4)
    p = one - braiding_sigma()
    f1 = p.compose(one + sigma_tilde(1).scale(qpow(1)))
    f2 = p.compose(one + sigma_tilde(2).scale(qpow(-2))).compose(
        one + sigma_tilde(2).scale(qpow(2))
    )
    return f1, f2


def torsion_not_right_linear(variant: int, nu: int = 1) -> bool:
    """Whether wedge(id + nu sigma_tilde(variant)) != 0; when it is nonzero
    the torsion of that connection cannot be a bimodule homomorphism."""
    one = TensorOp.identity(4)
    p = one - braiding_sigma()
    return not p.compose(one + sigma_tilde(variant, nu)).is_zero()


# ---------------------------------------------------------------------------
# The spinor connection
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _tau_core(a: int, b: int) -> tuple:
    """sum_l (Rhat^a)^{rl}_{mj} (Rhat^b)^{st}_{lk} as ((r,s,t),(m,j,k)) pairs."""
    ra = rhat_power(a)
    rb = rhat_power(b)
    out: dict = {}
    for ((r, l), (m, j)), v in ra.data.items():
        for ((s, t), (l2, k)), w in rb.data.items():
            if l2 != l:
                continue
            _acc(out, ((r, s, t), (m, j, k)), v * w)
    return tuple(out.items())


def _assemble_tau(first_plus, second_minus, pre_plus, pre_minus) -> dict:
    """Family member tau(psi^eta_m (x) theta_jk) -> {((r,s),(eta,t)): c}.

    Positive chirality: pre+ q^(j+k) (Rhat^a)^{rl}_{mj} Rhat^{st}_{lk};
    negative chirality: pre- q^(j+k) (Rhat^-1)^{rl}_{mj} (Rhat^b)^{st}_{lk}.
    """
    table: dict = {}
    for eta, core, pre in (
        (1, _tau_core(first_plus, 1), pre_plus),
        (-1, _tau_core(-1, second_minus), pre_minus),
    ):
        for ((r, s, t), (m, j, k)), v in core:
            d = table.setdefault(((eta, m), (j, k)), {})
            _acc(d, ((r, s), (eta, t)), pre * v * qpow(j + k))
    for label in PSI_INDEX:
        for jk in INDEX_PAIRS:
            table.setdefault((label, jk), {})
    return table


def tau_table(spec: ConnSpec) -> dict:
    """The bimodule homomorphism of the spinor connection on invariants."""
    key = "tau"
    if key not in spec._cache:
        pre_minus = spec.gamma if spec.nu > 0 else -spec.gamma
        spec._cache[key] = _assemble_tau(spec.eta, spec.etap, spec.gamma, pre_minus)
    return spec._cache[key]


def tau_apply(spec: ConnSpec, psi: SpinorElem, w: FormElem) -> FormSpinorElem:
    """tau(psi (x)_A w) for general arguments."""
    tau = tau_table(spec)
    out = FormSpinorElem.zero(spec.calculus)
    for jk, b in w.coeffs.items():
        moved = psi * b
        for label, c in moved.coeffs.items():
            for key2, v in tau[(label, jk)].items():
                _acc_alg(out.terms, key2, c.scale(v))
    return FormSpinorElem(out.terms, spec.calculus)


def _table_from_tau(tau: dict, calculus="+") -> dict:
    """Connection table theta (x) psi - tau(psi (x) theta) on the basis."""
    tbl = {}
    for label in PSI_INDEX:
        row: dict = {}
        for jk, c in _TH.items():
            _acc(row, (jk, label), c)
            for key2, v in tau.get((label, jk), {}).items():
                _acc(row, key2, -(c * v))
        tbl[label] = {k: v for k, v in row.items() if not v.is_zero()}
    return tbl


def conn_table(spec: ConnSpec) -> dict:
    """nabla_S on the invariant basis: {label: {((j,k), label'): ScalarQ}}."""
    key = "conn"
    if key not in spec._cache:
        spec._cache[key] = _table_from_tau(tau_table(spec), spec.calculus)
    return spec._cache[key]


def _connection_apply(tbl: dict, psi: SpinorElem, calculus) -> FormSpinorElem:
    out = FormSpinorElem.zero(calculus)
    for label, a in psi.coeffs.items():
        da = differential(a, calculus)
        for ij, b in da.coeffs.items():
            _acc_alg(out.terms, (ij, label), b)
        for key2, v in tbl[label].items():
            _acc_alg(out.terms, key2, a.scale(v))
    return FormSpinorElem(out.terms, calculus)


def nabla_spinor(spec: ConnSpec, psi: SpinorElem) -> FormSpinorElem:
    """The spinor connection induced by the braided connection of spec."""
    if psi.calculus != spec.calculus:
        raise ValueError("cannot mix the two calculi")
    return _connection_apply(conn_table(spec), psi, spec.calculus)


# ---------------------------------------------------------------------------
# Compatibility with the Clifford action, and uniqueness of the family
# ---------------------------------------------------------------------------


def _compat_cells(tmap: dict, st: TensorOp, jk, label) -> dict:
    """tau(m(theta_jk (x) psi)(x)theta) - m sigma tau(theta_jk (x) psi (x) theta)."""
    act = theta_action_table()
    p = INDEX_PAIRS.index(jk)
    cells: dict = {}
    for label2, c in act[(p, label)]:
        for mn, tc in _TH.items():
            for key2, v in tmap.get((label2, mn), {}).items():
                _acc(cells, key2, c * tc * v)
    for mn, tc in _TH.items():
        for (ab, label2), v in tmap.get((label, mn), {}).items():
            col = jk + ab
            for (o, i), w in st.data.items():
                if i != col:
                    continue
                for label3, c3 in act[(INDEX_PAIRS.index(o[2:]), label2)]:
                    _acc(cells, (o[:2], label3), -(tc * v * w * c3))
    return cells


def module_compatible(tau: dict, variant: int, nu: int = 1) -> bool:
    """Whether the spinor map tau intertwines the Clifford action with the
    braided connection nu * sigma_tilde(variant)."""
    st = sigma_tilde(variant, nu)
    for jk in INDEX_PAIRS:
        for label in PSI_INDEX:
            for v in _compat_cells(tau, st, jk, label).values():
                if not v.is_zero():
                    return False
    return True


def compatible_braidings(tau: dict) -> list:
    """All (variant, nu) whose braided connection tau is compatible with."""
    return [
        (variant, nu)
        for variant in (1, 2, 3, 4)
        for nu in (1, -1)
        if module_compatible(tau, variant, nu)
    ]


def _hopf_tau_basis() -> list:
    """The four-dimensional space of right-covariant candidates for tau."""
    rp = rhat_power(1)
    rm = rhat_power(-1)
    t1: dict = {}
    for ((s, t), (j, k)), v in rp.data.items():
        for m in (1, 2):
            d = t1.setdefault(((1, m), (j, k)), {})
            _acc(d, ((m, s), (1, t)), v * qpow(j + k))
    t2: dict = {}
    for ((r, s, t), (m, j, k)), v in _tau_core(1, 1):
        d = t2.setdefault(((1, m), (j, k)), {})
        _acc(d, ((r, s), (1, t)), v * qpow(j + k))
    t3: dict = {}
    for ((r, s), (i, j)), v in rm.data.items():
        for k in (1, 2):
            d = t3.setdefault(((-1, i), (j, k)), {})
            _acc(d, ((r, s), (-1, k)), v * qpow(j + k))
    t4: dict = {}
    for ((r, s, t), (m, j, k)), v in _tau_core(-1, 1):
        d = t4.setdefault(((-1, m), (j, k)), {})
        _acc(d, ((r, s), (-1, t)), v * qpow(j + k))
    return [t1, t2, t3, t4]


def _hopf_v_basis() -> list:
    """The two-dimensional space of chirality-flipping candidates."""
    rp = rhat_power(1)
    v1: dict = {}
    for i in (1, 2):
        d = v1.setdefault((1, i), {})
        for (j, k), c in CUP_VALUES.items():
            _acc(d, ((i, j), (-1, k)), c)
    v2: dict = {}
    for i in (1, 2):
        d = v2.setdefault((-1, i), {})
        for ((k, l), (m, i2)), v in rp.data.items():
            if i2 != i:
                continue
            for (j, m2), c in CUP_VALUES.items():
                if m2 != m:
                    continue
                _acc(d, ((j, k), (1, l)), v * c)
    return [v1, v2]


def spinor_compat_solution(variant: int, nu: int = 1) -> tuple:
    """Solution spaces of the Clifford-compatibility system over the
    covariant candidate families.

    Returns (tau_solutions, v_solutions); each is a list of coefficient
    vectors over the four-parameter chirality-preserving family and the
    two-parameter chirality-flipping family respectively.  The two parts
    land in opposite chirality components, so they must vanish separately.
    """
    st = sigma_tilde(variant, nu)
    act = theta_action_table()
    tau_maps = _hopf_tau_basis()
    v_maps = _hopf_v_basis()
    rows_tau: dict = {}
    rows_v: dict = {}
    for jk in INDEX_PAIRS:
        p = INDEX_PAIRS.index(jk)
        for label in PSI_INDEX:
            for n, tmap in enumerate(tau_maps):
                for key, val in _compat_cells(tmap, st, jk, label).items():
                    if val.is_zero():
                        continue
                    rows_tau.setdefault((jk, label, key), {})[n] = val
            for n, vmap in enumerate(v_maps):
                cells: dict = {}
                for label2, c in act[(p, label)]:
                    for key2, v in vmap.get(label2, {}).items():
                        _acc(cells, key2, c * v)
                for (ab, label2), v in vmap.get(label, {}).items():
                    col = jk + ab
                    for (o, i), w in st.data.items():
                        if i != col:
                            continue
                        for label3, c3 in act[(INDEX_PAIRS.index(o[2:]), label2)]:
                            _acc(cells, (o[:2], label3), -(v * w * c3))
                for key, val in cells.items():
                    if val.is_zero():
                        continue
                    rows_v.setdefault((jk, label, key), {})[n] = val
    tau_sol = _nullspace(list(rows_tau.values()), 4)
    v_sol = _nullspace(list(rows_v.values()), 2)
    return tau_sol, v_sol


def tau_from_conn_table(tbl: dict, calculus="+") -> dict:
    """Express a connection table as theta (x) psi - tau(psi (x) theta) with
    tau in the covariant candidate family; unique when it exists."""
    basis = _hopf_tau_basis()
    contracted = [_table_from_tau(b, calculus) for b in basis]
    theta_part = _table_from_tau(
        {(label, jk): {} for label in PSI_INDEX for jk in INDEX_PAIRS}, calculus
    )
    eqs = []
    for label in PSI_INDEX:
        keys = set(tbl[label])
        for c in contracted:
            keys |= set(c[label])
        keys |= set(theta_part[label])
        for key in keys:
            coeffs = [
                theta_part[label].get(key, ZERO) - c[label].get(key, ZERO)
                for c in contracted
            ]
            eqs.append((coeffs, theta_part[label].get(key, ZERO) - tbl[label].get(key, ZERO)))
    sol = _solve_small(eqs, 4)
    out: dict = {}
    for n, x in enumerate(sol):
        if x.is_zero():
            continue
        for key, cell in basis[n].items():
            d = out.setdefault(key, {})
            for key2, v in cell.items():
                _acc(d, key2, x * v)
    for label in PSI_INDEX:
        for jk in INDEX_PAIRS:
            out.setdefault((label, jk), {})
    return out


def _solve_small(eqs: list, n: int) -> list:
    """Unique solution of an overdetermined exact linear system, or raises."""
    pivots: dict = {}
    for coeffs, rhs in eqs:
        row = {j: c for j, c in enumerate(coeffs) if not c.is_zero()}
        row[n] = rhs
        while row:
            col = min(row)
            if col == n:
                if not row[n].is_zero():
                    raise ArithmeticError("inconsistent linear system")
                break
            prow = pivots.get(col)
            if prow is None:
                inv = ONE / row[col]
                pivots[col] = {c: v * inv for c, v in row.items()}
                break
            f = row.pop(col)
            for c2, v2 in prow.items():
                if c2 == col:
                    continue
                _acc(row, c2, -(f * v2))
    if len(pivots) < n:
        raise ArithmeticError("underdetermined linear system")
    sol = [ZERO] * n
    for col in sorted(pivots, reverse=True):
        prow = pivots[col]
        val = prow.get(n, ZERO)
        for c2, v2 in prow.items():
            if c2 in (col, n):
                continue
            val = val - v2 * sol[c2]
        sol[col] = val
    return sol


# ---------------------------------------------------------------------------
# The metric dual of the spinor connection
# ---------------------------------------------------------------------------


def _structure_tag(structure) -> str:
    return structure if isinstance(structure, str) else structure.tag


def _require_regime(spec: ConnSpec, tag: str):
    if spec.regime is None:
        raise ValueError("gamma has no declared conjugation rule")
    want = "UNIT" if tag == "sharp" else "REAL"
    if spec.regime.kind != want:
        raise ValueError(
            "the %s structure needs the %s conjugation regime" % (tag, want)
        )
    return spec.regime


def _solve_linear(rows: list, rhs: list) -> list:
    """Solve a square exact linear system by elimination; raises if singular."""
    n = len(rows)
    mat = [list(rows[i]) + [rhs[i]] for i in range(n)]
    perm = list(range(n))
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if not mat[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            raise ArithmeticError("singular linear system")
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = ONE / mat[col][col]
        mat[col] = [v * inv for v in mat[col]]
        for r in range(n):
            if r == col:
                continue
            f = mat[r][col]
            if f.is_zero():
                continue
            mat[r] = [a - f * b for a, b in zip(mat[r], mat[col])]
    _ = perm
    return [mat[i][n] for i in range(n)]


def _dual_of_table(tbl: dict, structure, calculus, regime: ConjRegime) -> dict:
    """The metric-dual connection table, from
    <psi, dual(psi')>_0 = d<psi, psi'>_0 - <nabla psi, psi'>_0."""
    tag = _structure_tag(structure)
    H = spinor_metric_matrix(tag, calculus)
    sf = theta_star_table(tag, calculus)
    cols = [(kl, L) for kl in INDEX_PAIRS for L in PSI_INDEX]
    star_coef = {}
    for kl in INDEX_PAIRS:
        for rs, sc in sf[kl]:
            star_coef[(kl, rs)] = sc
    rows = []
    for I in PSI_INDEX:
        for mn in INDEX_PAIRS:
            row = []
            for kl, L in cols:
                c = star_coef.get((kl, mn), ZERO)
                h = H.get((I, L), ZERO)
                row.append(c * h)
            rows.append(row)
    out = {}
    for J in PSI_INDEX:
        rhs = []
        for I in PSI_INDEX:
            for mn in INDEX_PAIRS:
                r = ZERO
                for (mn2, L), v in tbl[I].items():
                    if mn2 != mn:
                        continue
                    r = r + v * H.get((L, J), ZERO)
                rhs.append(-r)
        sol = _solve_linear(rows, rhs)
        row_out = {}
        for idx, y in enumerate(sol):
            if not y.is_zero():
                row_out[cols[idx]] = y.conj(regime)
        out[J] = row_out
    return out


def dual_table(spec: ConnSpec, structure) -> dict:
    """nabla_S^* on the invariant basis, solved from the defining pairing."""
    tag = _structure_tag(structure)
    key = ("dual", tag)
    if key not in spec._cache:
        regime = _require_regime(spec, tag)
        spec._cache[key] = _dual_of_table(
            conn_table(spec), tag, spec.calculus, regime
        )
    return spec._cache[key]


def dual_connection(spec: ConnSpec, structure, psi: SpinorElem) -> FormSpinorElem:
    """The connection dual to nabla_S with respect to the invariant metric."""
    if psi.calculus != spec.calculus:
        raise ValueError("cannot mix the two calculi")
    return _connection_apply(dual_table(spec, structure), psi, spec.calculus)


def dual_closed_table(spec: ConnSpec) -> dict:
    """Expected dual: the tau family with reflected signs and nu gamma-bar
    (real regime), or the same signs and q^-6 gamma-bar (unit regime)."""
    gb = spec.gamma_bar()
    if spec.regime.kind == "REAL":
        pre_plus = gb if spec.nu > 0 else -gb
        tau = _assemble_tau(-spec.etap, -spec.eta, pre_plus, gb)
    else:
        scaled = qpow(-6) * gb
        pre_minus = scaled if spec.nu > 0 else -scaled
        tau = _assemble_tau(spec.eta, spec.etap, scaled, pre_minus)
    return _table_from_tau(tau, spec.calculus)


def shares_gamma_connection(spec: ConnSpec, structure) -> bool:
    """Whether nabla_S and its metric dual are compatible with a common
    braided connection on one-forms."""
    own = compatible_braidings(tau_table(spec))
    dual = compatible_braidings(
        tau_from_conn_table(dual_table(spec, structure), spec.calculus)
    )
    return bool(set(own) & set(dual))


# ---------------------------------------------------------------------------
# Dirac operator
# ---------------------------------------------------------------------------


def contract_clifford(elem: FormSpinorElem) -> SpinorElem:
    """Clifford multiplication of the form leg into the spinor leg."""
    act = theta_action_table()
    out = SpinorElem.zero(elem.calculus)
    for (ij, label), a in elem.terms.items():
        for label2, c in act[(INDEX_PAIRS.index(ij), label)]:
            _acc_alg(out.coeffs, label2, a.scale(c))
    return SpinorElem(out.coeffs, elem.calculus)


def dirac(spec: ConnSpec, psi: SpinorElem) -> SpinorElem:
    """D = Clifford multiplication after the spinor connection."""
    return contract_clifford(nabla_spinor(spec, psi))


def dirac_values(spec: ConnSpec) -> tuple:
    """(d+, d-) with D psi^+_j = d+ psi^-_j and D psi^-_j = d- psi^+_j."""
    nu_g = spec.gamma if spec.nu > 0 else -spec.gamma
    dp = (qpow(-1) / QHAT) * (ONE - spow(9 - 3 * spec.eta) * spec.gamma)
    dm = -(qpow(1) * qint(2) * C1 / QHAT) * (ONE - spow(3 - 3 * spec.etap) * nu_g)
    return dp, dm


def check_dirac_symmetry(spec: ConnSpec, structure) -> tuple:
    """Whether <D phi, psi> = <phi, D psi> for the chosen metric.

    Symmetry on the whole module reduces to the invariant basis; the
    second slot of the pairing conjugates with the declared regime.
    Returns (flag, certificate) where the certificate lists the residuals.
    """
    tag = _structure_tag(structure)
    regime = _require_regime(spec, tag)
    H = spinor_metric_matrix(tag, spec.calculus)
    dp, dm = dirac_values(spec)
    dcoef = {(1, 1): dp, (1, 2): dp, (-1, 1): dm, (-1, 2): dm}
    residuals = {}
    ok = True
    for I in PSI_INDEX:
        fI = (-I[0], I[1])
        for J in PSI_INDEX:
            fJ = (-J[0], J[1])
            delta = dcoef[I] * H.get((fI, J), ZERO) - dcoef[J].conj(regime) * H.get(
                (I, fJ), ZERO
            )
            residuals[(I, J)] = delta
            if not delta.is_zero():
                ok = False
    return ok, {"symmetric": ok, "residuals": residuals}


# ---------------------------------------------------------------------------
# The connection Laplacian
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _metric_values() -> tuple:
    g = metric_g()
    out = {}
    for ((), idx), v in g.data.items():
        out[(idx[:2], idx[2:])] = v
    return tuple(out.items())


def _laplace_tables(spec: ConnSpec, structure):
    tag = _structure_tag(structure)
    key = ("laplace", tag)
    if key not in spec._cache:
        nab = conn_table(spec)
        dual = dual_table(spec, tag)
        gv = dict(_metric_values())
        X = tangent_basis(spec.calculus)
        second = DualElem.zero()
        for (kl, mn), v in gv.items():
            second = second + (X[kl] * X[mn]).scale(v)
        inv_part = {}
        cross = {}
        for J in PSI_INDEX:
            ip: dict = {}
            for (kl, L), v1 in nab[J].items():
                for (mn, M), v2 in dual[L].items():
                    w = gv.get((kl, mn))
                    if w is None:
                        continue
                    _acc(ip, M, v1 * v2 * w)
            inv_part[J] = {k: v for k, v in ip.items() if not v.is_zero()}
            sums: dict = {}
            for src in (nab[J], dual[J]):
                for key2, v in src.items():
                    _acc(sums, key2, v)
            cf: dict = {}
            for (mn, L), v in sums.items():
                if v.is_zero():
                    continue
                for kl in INDEX_PAIRS:
                    w = gv.get((kl, mn))
                    if w is None:
                        continue
                    cur = cf.get(L)
                    add = X[kl].scale(w * v)
                    cf[L] = add if cur is None else cur + add
            cross[J] = {L: f for L, f in cf.items() if not f.is_zero()}
        spec._cache[key] = (second, inv_part, cross)
    return spec._cache[key]


def laplacian(spec: ConnSpec, structure, psi: SpinorElem) -> SpinorElem:
    """The Laplacian nabla^* nabla_S, assembled from the invariant data of
    the connection and its dual plus second-order tangent functionals."""
    if psi.calculus != spec.calculus:
        raise ValueError("cannot mix the two calculi")
    second, inv_part, cross = _laplace_tables(spec, structure)
    out = SpinorElem.zero(spec.calculus)
    for label, a in psi.coeffs.items():
        t1 = convolve_right(second, a)
        if not t1.is_zero():
            _acc_alg(out.coeffs, label, t1)
        for label2, c in inv_part[label].items():
            _acc_alg(out.coeffs, label2, a.scale(c))
        for label2, f in cross[label].items():
            t3 = convolve_right(f, a)
            if not t3.is_zero():
                _acc_alg(out.coeffs, label2, t3)
    return SpinorElem(out.coeffs, spec.calculus)


def gram_pair0(u: FormSpinorElem, v: FormSpinorElem, structure) -> AlgElem:
    """g(<u, v>_0): the metric pairing of two connection images, with the
    symmetric metric contracted over the form legs."""
    from .hopf import star

    tag = _structure_tag(structure)
    H = spinor_metric_matrix(tag, u.calculus)
    sf = theta_star_table(tag, u.calculus)
    gv = dict(_metric_values())
    out = AlgElem.zero()
    for (kl, L), a in u.terms.items():
        for (mn, M), b in v.terms.items():
            h = H.get((L, M))
            if h is None:
                continue
            c = ZERO
            for rs, sc in sf[mn]:
                w = gv.get((kl, rs))
                if w is not None:
                    c = c + sc * w
            c = c * h
            if c.is_zero():
                continue
            out = out + (a * star(b, tag)).scale(c)
    return out


def laplacian_coefficients(spec: ConnSpec) -> tuple:
    """(alpha1, alpha0, alpha2, beta1, beta0, beta2): the Laplacian as
    parity blocks alpha1 d1 + alpha0 d0 + alpha2 on the positive chirality
    and beta1 d1 + beta0 d0 + beta2 on the negative one."""
    eta, etap, nu = spec.eta, spec.etap, spec.nu
    g = spec.gamma
    gb = spec.gamma_bar()
    nugb = gb if nu > 0 else -gb
    nug = g if nu > 0 else -g
    two = qint(2)
    peta = spow(3 - eta) + spow(eta - 3)
    petap = spow(3 + etap) + spow(-3 - etap)
    lo = ScalarQ.from_int((1 - eta) // 2)
    hi = ScalarQ.from_int((1 + etap) // 2)
    if spec.regime.kind == "REAL":
        a1 = spow(7) * C1 * (lo * g + hi * nugb)
        a0 = (spow(5) * C1 / QHAT) * (peta * g + petap * nugb)
        b1 = spow(7) * C1 * (lo * gb + hi * nug)
        b0 = (spow(5) * C1 / QHAT) * (peta * gb + petap * nug)
        mid = spow(2 + abs(eta + etap)) + spow(-2 - abs(eta + etap))
        prod = (g * gb) if nu > 0 else -(g * gb)
        a2 = -(C1 / (QHAT * QHAT)) * (two + qpow(6) * mid * prod)
        b2 = a2
    else:
        a1 = lo * spow(1) * C1 * (qpow(3) * g + qpow(-3) * gb)
        a0 = (C1 / QHAT) * (spow(5) * peta * g + spow(-7) * peta * gb)
        b1 = hi * spow(1) * C1 * (qpow(3) * nug + qpow(-3) * nugb)
        b0 = (C1 / QHAT) * (spow(5) * petap * nug + spow(-7) * petap * nugb)
        a2 = -(C1 * two / (QHAT * QHAT)) * (ONE + g * gb)
        b2 = a2
    return a1, a0, a2, b1, b0, b2


# ---------------------------------------------------------------------------
# The Lichnerowicz-type identity
# ---------------------------------------------------------------------------


def bochner_constant(spec: ConnSpec) -> ScalarQ:
    eta = spec.eta
    g2 = spec.gamma * spec.gamma
    const = (
        qpow(-eta - 1)
        * qint(2)
        * C1
        * ((qpow(3) - ONE) / QHAT)
        * ((qpow(6) * g2 - ONE) / QHAT)
    )
    return const if eta > 0 else -const


def bochner(spec: ConnSpec, structure="dagger", witnesses=None) -> ScalarQ:
    """(q+1) D^2 - q^{(1-3 eta)/2} [2] nabla^* nabla_S is a scalar; returns it.

    Needs matching chirality signs (variant 1 or 4), nu = +1 and a real
    self-conjugate gamma; the identity is checked on the invariant basis
    and on the supplied witnesses before the constant is returned.
    """
    if spec.variant not in (1, 4):
        raise ValueError("the curvature term is scalar only when the two chirality signs agree")
    if spec.nu != 1:
        raise ValueError("needs nu = +1")
    if spec.regime is None or spec.regime.kind != "REAL" or spec.regime.gamma_rule != "self":
        raise ValueError("needs a real self-conjugate gamma")
    const = bochner_constant(spec)
    factor = spow(1 - 3 * spec.eta) * qint(2)
    qp1 = qpow(1) + ONE
    if witnesses is None:
        from .hopf import A, B

        witnesses = []
        for label in PSI_INDEX:
            base = SpinorElem({label: AlgElem.one()}, spec.calculus)
            witnesses.append(base)
        witnesses.append(A * SpinorElem({(1, 1): AlgElem.one()}, spec.calculus))
        witnesses.append(B * SpinorElem({(-1, 2): AlgElem.one()}, spec.calculus))
    for x in witnesses:
        lhs = dirac(spec, dirac(spec, x)).scale(qp1) - laplacian(
            spec, structure, x
        ).scale(factor)
        if not (lhs - x.scale(const)).is_zero():
            raise ArithmeticError("the Lichnerowicz-type identity fails on a witness")
    return const
