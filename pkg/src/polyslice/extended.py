"""Extended-precision evaluation of the S-resolvent closed forms and series.

The geometric tail after 60 terms is far below double-precision rounding once
|s| >= 2 ||T||, so comparing closed form and truncated series at that level
needs more digits.  Matrices here are numpy object arrays of ``gmpy2.mpfr``;
every input (operator matrices, the components of s) is a double and converts
exactly.
"""

from __future__ import annotations

import gmpy2
import numpy as np

from .clifford import Paravector, pv_conj_array
from .operators import CliffordOperator, ParavectorOperator, left_mult_array, right_mult_array

PRECISION_BITS = 256


def _ctx(bits: int):
    return gmpy2.context(gmpy2.get_context(), precision=bits)


def to_ext(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    out = np.empty(a.shape, dtype=object)
    flat = out.reshape(-1)
    for i, x in enumerate(a.reshape(-1)):
        flat[i] = gmpy2.mpfr(float(x))
    return out


def to_float(a: np.ndarray) -> np.ndarray:
    return np.vectorize(float, otypes=[float])(a)


def identity(size: int) -> np.ndarray:
    return to_ext(np.eye(size))


def inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan elimination with partial pivoting on an object array."""
    size = a.shape[0]
    aug = np.concatenate([a.copy(), identity(size)], axis=1)
    for col in range(size):
        piv = max(range(col, size), key=lambda r: abs(aug[r, col]))
        if aug[piv, col] == 0:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            aug[[col, piv]] = aug[[piv, col]]
        aug[col] = aug[col] / aug[col, col]
        for r in range(size):
            if r != col and aug[r, col] != 0:
                aug[r] = aug[r] - aug[r, col] * aug[col]
    return aug[:, size:]


def _setup(T: ParavectorOperator, s: Paravector):
    lt = to_ext(T.lifted)
    size = lt.shape[0]
    eye = identity(size)
    re = gmpy2.mpfr(float(s.re))
    mod2 = sum(gmpy2.mpfr(float(x)) ** 2 for x in s.parts)
    q = lt.dot(lt) - 2 * re * lt + mod2 * eye
    return lt, eye, mod2, q


def closed_and_series(T: ParavectorOperator, s: Paravector, terms: int = 60,
                      B: CliffordOperator | None = None, bits: int = PRECISION_BITS) -> dict:
    """Closed forms and truncated series of S_L^{-1}, S_R^{-1} and (if B) the modified left resolvent.

    Returns float64 matrices of each closed form and of each difference
    ``closed - series``, both computed before rounding back to double.
    """
    with _ctx(bits):
        lt, eye, mod2, q = _setup(T, s)
        qinv = inverse(q)
        sbar = pv_conj_array(s.coeffs)
        r_sbar = to_ext(right_mult_array(sbar, T.m))
        l_sbar = to_ext(left_mult_array(sbar, T.m))
        # s^{-1} = conj(s) / |s|^2, and R(s^{-1})^{k+1} = R(s^{-k-1}) because powers commute
        r_inv = r_sbar / mod2
        l_inv = l_sbar / mod2

        out = {}
        closed_l = -qinv.dot(lt - r_sbar)
        closed_r = -(lt - l_sbar).dot(qinv)
        # left: sum T^k R(s^{-1})^{k+1}; right: sum L(s^{-1})^{k+1} T^k.  R(.) commutes
        # with the lift of T while L(.) does not, hence the two recursions.
        for name, closed in (("L", closed_l), ("R", closed_r)):
            series = np.zeros_like(closed)
            series[:] = gmpy2.mpfr(0)
            term = r_inv.copy() if name == "L" else l_inv.copy()
            for _ in range(terms):
                series = series + term
                term = lt.dot(term).dot(r_inv) if name == "L" else l_inv.dot(term).dot(lt)
            out[name] = (to_float(closed), to_float(closed - series))
        if B is not None:
            b = to_ext(B.realrep)
            closed_m = -qinv.dot(lt.dot(b) - r_sbar.dot(b))
            series = np.zeros_like(closed_m)
            series[:] = gmpy2.mpfr(0)
            term = r_inv.dot(b)
            step = lt.dot(r_inv)
            for _ in range(terms):
                series = series + term
                term = step.dot(term)
            out["modified_L"] = (to_float(closed_m), to_float(closed_m - series))
        return out
