"""Exact symbolic engine for the spin geometry of the quantum group SL_q(2).

Subpackages build on each other roughly in this order: scalars (exact
rational functions in q^(1/2)), hopf (the coordinate Hopf algebra), dualfunc
(the dual U_q(sl2) with the pairing), tensors (R-matrix calculus), forms
(the two 4-dimensional covariant differential calculi), clifford (quantum
Clifford algebra and spinors), connections (covariant derivatives, Dirac
operator, Laplacian), invops (invariant differential operators and spectra).
"""

from .scalars import (
    ScalarQ,
    ConjRegime,
    REAL,
    UNIT,
    ZERO,
    ONE,
    S,
    Q,
    I,
    GAMMA,
    C1,
    C2,
    QHAT,
    qint,
    spow,
    qpow,
    parse_scalar,
    render,
)

__all__ = [
    "ScalarQ",
    "ConjRegime",
    "REAL",
    "UNIT",
    "ZERO",
    "ONE",
    "S",
    "Q",
    "I",
    "GAMMA",
    "C1",
    "C2",
    "QHAT",
    "qint",
    "spow",
    "qpow",
    "parse_scalar",
    "render",
]
