"""Exact tensor calculus on powers of the 2-dimensional fundamental space.

All maps here are linear operators between tensor powers of a 2-dim space
with ScalarQ entries.  The 4-dim space of left-invariant 1-forms enters as a
pair of 2-dim legs (theta_ij has the two indices i, j), so the braiding
sigma on Gamma (x) Gamma is an operator on four 2-dim legs, and so on.

Index values are 1 and 2 throughout, matching the conventions used in the
rest of the package.

The coefficient maps are stored sparsely (missing entry = 0) with dense
semantics; the operators involved are mostly permutation-like, and exact
arithmetic on the few nonzero entries is what dominates the cost.
"""

from __future__ import annotations

from itertools import product

from .scalars import ONE, QHAT, ZERO, C1, ScalarQ, qint, spow


class TensorOp:
    """Linear map (C^2)^(x nin) -> (C^2)^(x nout) over ScalarQ.

    data maps (out_indices, in_indices) -> ScalarQ, indices in {1,2}.
    """

    __slots__ = ("nout", "nin", "data")

    def __init__(self, nout: int, nin: int, data: dict | None = None):
        self.nout = nout
        self.nin = nin
        self.data = {}
        if data:
            for key, val in data.items():
                if val.is_zero():
                    continue
                o, i = key
                if len(o) != nout or len(i) != nin:
                    raise ValueError("entry signature mismatch %r" % (key,))
                self.data[key] = val

    # -- constructors -------------------------------------------------------

    @staticmethod
    def identity(n: int) -> "TensorOp":
        data = {}
        for idx in product((1, 2), repeat=n):
            data[(idx, idx)] = ONE
        return TensorOp(n, n, data)

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "TensorOp") -> "TensorOp":
        if (self.nout, self.nin) != (other.nout, other.nin):
            raise ValueError("signature mismatch in TensorOp addition")
        data = dict(self.data)
        for key, val in other.data.items():
            cur = data.get(key)
            new = val if cur is None else cur + val
            if new.is_zero():
                data.pop(key, None)
            else:
                data[key] = new
        out = TensorOp(self.nout, self.nin)
        out.data = data
        return out

    def __sub__(self, other: "TensorOp") -> "TensorOp":
        return self + other.scale(ScalarQ.from_int(-1))

    def scale(self, c) -> "TensorOp":
        if not isinstance(c, ScalarQ):
            c = ScalarQ.from_int(c)
        out = TensorOp(self.nout, self.nin)
        if not c.is_zero():
            out.data = {k: c * v for k, v in self.data.items()}
        return out

    def compose(self, other: "TensorOp") -> "TensorOp":
        """self after other."""
        if self.nin != other.nout:
            raise ValueError(
                "cannot compose: %d in-legs after %d out-legs" % (self.nin, other.nout)
            )
        by_out: dict = {}
        for (o, i), v in other.data.items():
            by_out.setdefault(o, []).append((i, v))
        acc: dict = {}
        for (o, mid), v in self.data.items():
            hits = by_out.get(mid)
            if not hits:
                continue
            for i, w in hits:
                key = (o, i)
                cur = acc.get(key)
                t = v * w
                acc[key] = t if cur is None else cur + t
        out = TensorOp(self.nout, other.nin)
        out.data = {k: v for k, v in acc.items() if not v.is_zero()}
        return out

    def tensor(self, other: "TensorOp") -> "TensorOp":
        out = TensorOp(self.nout + other.nout, self.nin + other.nin)
        data = {}
        for (o1, i1), v in self.data.items():
            for (o2, i2), w in other.data.items():
                data[(o1 + o2, i1 + i2)] = v * w
        out.data = data
        return out

    def lift(self, start: int, total: int) -> "TensorOp":
        """Act on legs start..start+n-1 (0-based) of `total` legs, identity elsewhere."""
        if self.nout != self.nin:
            raise ValueError("lift needs a square operator")
        n = self.nin
        rest = total - n
        if rest < 0 or start < 0 or start + n > total:
            raise ValueError("lift out of range")
        data = {}
        for (o, i), v in self.data.items():
            for fill in product((1, 2), repeat=rest):
                oo = fill[:start] + o + fill[start:]
                ii = fill[:start] + i + fill[start:]
                data[(oo, ii)] = v
        out = TensorOp(total, total)
        out.data = data
        return out

    def entry(self, out_idx: tuple, in_idx: tuple) -> ScalarQ:
        return self.data.get((out_idx, in_idx), ZERO)

    def apply(self, vec: dict) -> dict:
        """Apply to a sparse vector {in_indices: ScalarQ}."""
        out: dict = {}
        for (o, i), v in self.data.items():
            c = vec.get(i)
            if c is None:
                continue
            t = v * c
            cur = out.get(o)
            out[o] = t if cur is None else cur + t
        return {k: v for k, v in out.items() if not v.is_zero()}

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        if (self.nout, self.nin) != (other.nout, other.nin):
            return False
        if self.data.keys() != other.data.keys():
            return False
        return all(other.data[k] == v for k, v in self.data.items())

    def is_zero(self) -> bool:
        return not self.data

    def __repr__(self):
        return "TensorOp(%d<-%d, %d entries)" % (self.nout, self.nin, len(self.data))

    __hash__ = None

    # -- exact linear algebra ----------------------------------------------

    def rank(self) -> int:
        total = 0
        for block in self._weight_blocks():
            total += _gauss_rank(block)
        return total

    def kernel_basis(self) -> list:
        """Exact kernel basis as sparse vectors {in_indices: ScalarQ}."""
        if self.nout != self.nin:
            raise ValueError("kernel_basis needs a square signature")
        cols = list(product((1, 2), repeat=self.nin))
        rows = cols
        matrix = [[self.entry(r, c) for c in cols] for r in rows]
        ker = _gauss_kernel(matrix)
        out = []
        for coeffs in ker:
            vec = {cols[j]: c for j, c in enumerate(coeffs) if not c.is_zero()}
            out.append(vec)
        return out

    def _weight_blocks(self):
        """Split into weight blocks (index-sum preserved) when possible."""
        if self.nout != self.nin:
            raise ValueError("rank needs a square signature")
        preserved = all(sum(o) == sum(i) for (o, i) in self.data)
        if not preserved:
            cols = list(product((1, 2), repeat=self.nin))
            yield [[self.entry(r, c) for c in cols] for r in cols]
            return
        groups: dict = {}
        for (o, i), v in self.data.items():
            groups.setdefault(sum(o), {})[(o, i)] = v
        for w, entries in sorted(groups.items()):
            idx = sorted({o for (o, _) in entries} | {i for (_, i) in entries})
            pos = {idx[j]: j for j in range(len(idx))}
            block = [[ZERO] * len(idx) for _ in idx]
            for (o, i), v in entries.items():
                block[pos[o]][pos[i]] = v
            yield block


def _gauss_rank(matrix) -> int:
    if not matrix:
        return 0
    nrows, ncols = len(matrix), len(matrix[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if not matrix[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        matrix[row], matrix[piv] = matrix[piv], matrix[row]
        inv = ONE / matrix[row][col]
        for r in range(row + 1, nrows):
            lead = matrix[r][col]
            if lead.is_zero():
                continue
            f = lead * inv
            src = matrix[row]
            dst = matrix[r]
            for j in range(col, ncols):
                if not src[j].is_zero():
                    dst[j] = dst[j] - f * src[j]
        row += 1
        rank += 1
        if row == nrows:
            break
    return rank


def _gauss_kernel(matrix) -> list:
    """Kernel of the matrix (list of coefficient lists, one per basis vector)."""
    if not matrix:
        return []
    nrows, ncols = len(matrix), len(matrix[0])
    pivots = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if not matrix[r][col].is_zero():
                piv = r
                break
        if piv is None:
            continue
        matrix[row], matrix[piv] = matrix[piv], matrix[row]
        inv = ONE / matrix[row][col]
        matrix[row] = [x * inv for x in matrix[row]]
        for r in range(nrows):
            if r != row and not matrix[r][col].is_zero():
                f = matrix[r][col]
                matrix[r] = [
                    matrix[r][j] - f * matrix[row][j] for j in range(ncols)
                ]
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ZERO] * ncols
        vec[fc] = ONE
        for r, pc in enumerate(pivots):
            val = matrix[r][fc]
            if not val.is_zero():
                vec[pc] = -val
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# Builtin operators
# ---------------------------------------------------------------------------


def rhat() -> TensorOp:
    """The R-matrix: Rhat^{ij}_{kl} = delta^i_l delta^j_k q^(delta^i_j - 1/2)
    + q^(-1/2) qhat delta^i_1 delta^k_1 delta^j_2 delta^l_2."""
    data = {}
    for i, j, k, l in product((1, 2), repeat=4):
        val = ZERO
        if i == l and j == k:
            val = val + spow(2 * (1 if i == j else 0) - 1)
        if (i, k, j, l) == (1, 1, 2, 2):
            val = val + spow(-1) * QHAT
        if not val.is_zero():
            data[((i, j), (k, l))] = val
    return TensorOp(2, 2, data)


def rhat_inv() -> TensorOp:
    """Inverse R-matrix.  With e = Ccheck Chat one has Rhat = q^(1/2) id + q^(-1/2) e
    and e^2 = -[2] e, whence Rhat^-1 = q^(-1/2) id + q^(1/2) e."""
    e = cup().compose(cap())
    return TensorOp.identity(2).scale(spow(-1)) + e.scale(spow(1))


def rhat_power(eta: int) -> TensorOp:
    if eta == 1:
        return rhat()
    if eta == -1:
        return rhat_inv()
    raise ValueError("eta must be +-1")


def cup() -> TensorOp:
    """Ccheck in Mor(1, u x u): Ccheck^{12} = q^(-1/2), Ccheck^{21} = -q^(1/2)."""
    return TensorOp(2, 0, {((1, 2), ()): spow(-1), ((2, 1), ()): -spow(1)})


def cap() -> TensorOp:
    """Chat in Mor(u x u, 1): Chat_{ij} = -Ccheck^{ij}."""
    return TensorOp(0, 2, {((), (1, 2)): -spow(-1), ((), (2, 1)): spow(1)})


CUP_VALUES = {(1, 2): spow(-1), (2, 1): -spow(1)}
CAP_VALUES = {(1, 2): -spow(-1), (2, 1): spow(1)}


_op_cache: dict = {}


def braiding_sigma() -> TensorOp:
    """The braiding of Gamma (x)_A Gamma on left-invariant forms:
    sigma = Rhat_23 Rhat_12 RhatInv_34 RhatInv_23 on four 2-dim legs."""
    if "sigma" not in _op_cache:
        r, rinv = rhat(), rhat_inv()
        op = r.lift(1, 4)
        op = op.compose(r.lift(0, 4))
        op = op.compose(rinv.lift(2, 4))
        op = op.compose(rinv.lift(1, 4))
        _op_cache["sigma"] = op
    return _op_cache["sigma"]


def sigma_tilde(i: int, nu: int = 1) -> TensorOp:
    """Candidate braidings for Clifford-compatible connections on Gamma:
    nu * Rhat_23 Rhat^{eta_i}_12 Rhat^{eta'_i}_34 RhatInv_23, with sign pairs
    (eta_i, eta'_i) = (+,+), (+,-), (-,+), (-,-) for i = 1..4."""
    eta, etap = SIGMA_TILDE_SIGNS[i]
    if ("st", i) not in _op_cache:
        op = rhat().lift(1, 4)
        op = op.compose(rhat_power(eta).lift(0, 4))
        op = op.compose(rhat_power(etap).lift(2, 4))
        op = op.compose(rhat_inv().lift(1, 4))
        _op_cache[("st", i)] = op
    op = _op_cache[("st", i)]
    if nu == -1:
        op = op.scale(-1)
    elif nu != 1:
        raise ValueError("nu must be +-1")
    return op


SIGMA_TILDE_SIGNS = {1: (1, 1), 2: (1, -1), 3: (-1, 1), 4: (-1, -1)}


def metric_g(c1: ScalarQ | None = None) -> TensorOp:
    """The sigma-metric on Gamma (x) Gamma:
    g(theta_ij (x) theta_kl) = -q^(1/2) c1 Chat_{im} Chat_{nl} RhatInv^{mn}_{jk}."""
    if c1 is None:
        if "g" in _op_cache:
            return _op_cache["g"]
        c1 = C1
    rinv = rhat_inv()
    data = {}
    for i, j, k, l in product((1, 2), repeat=4):
        total = ZERO
        for m, n in product((1, 2), repeat=2):
            cim = CAP_VALUES.get((i, m))
            cnl = CAP_VALUES.get((n, l))
            if cim is None or cnl is None:
                continue
            r = rinv.entry((m, n), (j, k))
            if r.is_zero():
                continue
            total = total + cim * cnl * r
        total = total * (-spow(1)) * c1
        if not total.is_zero():
            data[((), (i, j, k, l))] = total
    op = TensorOp(0, 4, data)
    if c1 is C1:
        _op_cache["g"] = op
    return op


def tl_generator(n: int, i: int) -> TensorOp:
    """Temperley-Lieb generator e_i = cup cap on legs i, i+1 of n (0-based);
    satisfies e_i^2 = -[2] e_i here."""
    return cup().compose(cap()).lift(i, n)


def jones_wenzl(n: int) -> TensorOp:
    """Jones-Wenzl projector P_(n) on n legs, built by the standard recursion
    P_(k+1) = P_(k) + ([k]/[k+1]) P_(k) e_k P_(k) (the sign matches e^2 = -[2]e)."""
    if n < 1:
        raise ValueError("need at least one leg")
    if n > 4:
        raise ValueError("projector cap is 4 legs")
    if ("jw", n) not in _op_cache:
        p = TensorOp.identity(1)
        for k in range(1, n):
            p_big = p.lift(0, k + 1)
            e = tl_generator(k + 1, k - 1)
            corr = p_big.compose(e).compose(p_big).scale(qint(k) / qint(k + 1))
            p = p_big + corr
        _op_cache[("jw", n)] = p
    return _op_cache[("jw", n)]


# ---------------------------------------------------------------------------
# Woronowicz antisymmetrizers
# ---------------------------------------------------------------------------


def _reduced_word(perm) -> list:
    p = list(perm)
    word = []
    changed = True
    while changed:
        changed = False
        for i in range(len(p) - 1):
            if p[i] > p[i + 1]:
                p[i], p[i + 1] = p[i + 1], p[i]
                word.append(i)
                changed = True
    word.reverse()
    return word


def antisymmetrizer(k: int) -> TensorOp:
    """A_k = sum over S_k of sgn(pi) sigma_{T(pi)} on k Gamma-legs (2k 2-dim legs)."""
    if k == 0:
        return TensorOp.identity(0)
    if k > 4:
        raise ValueError("antisymmetrizer cap is 4 Gamma-legs")
    if ("anti", k) in _op_cache:
        return _op_cache[("anti", k)]
    from itertools import permutations

    sig = braiding_sigma()
    lifts = {i: sig.lift(2 * i, 2 * k) for i in range(k - 1)}
    cache: dict = {(): TensorOp.identity(2 * k)}

    def braid_product(word: tuple) -> TensorOp:
        if word in cache:
            return cache[word]
        head = braid_product(word[:-1])
        result = head.compose(lifts[word[-1]])
        cache[word] = result
        return result

    total = None
    for perm in permutations(range(k)):
        word = tuple(_reduced_word(perm))
        term = braid_product(word)
        if len(word) % 2:
            term = term.scale(-1)
        total = term if total is None else total + term
    _op_cache[("anti", k)] = total
    return total


def antisymmetrizer_dims(kmax: int = 4) -> list:
    """Exact ranks of A_k for k = 0..kmax."""
    dims = []
    for k in range(kmax + 1):
        if k == 0:
            dims.append(1)
        else:
            dims.append(antisymmetrizer(k).rank())
    return dims
