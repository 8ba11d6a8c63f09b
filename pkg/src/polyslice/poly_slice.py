"""Poly slice monogenic functions stored through their decomposition components.

A left function of order M is ``F(x) = sum_{k<M} conj(x)^k f_k(x)`` and a right one
is ``F(x) = sum_{k<M} f_k(x) conj(x)^k`` with slice monogenic ``f_k`` of the
same side.  Derivatives ``dbar^l F`` with ``dbar = (d_u + j d_v) / 2`` are taken
in closed form on the components.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Sequence

import mpmath
import numpy as np

from .clifford import Multivector, Paravector, SliceUnit, gp, pv_conj_array, scalar_array
from .errors import ClassConstraintError, DimensionError, SideMismatchError
from .quadrature import ContourSpec, PeriodicQuadrature, integrate_adaptive
from .slice_functions import (
    IntrinsicElementary,
    Side,
    SliceFunction,
    SliceMonogenicPoly,
    _as_array,
    _check_pair,
    check_inside,
    check_side,
    kernel_array,
    representation_extend,
    star_product,
)


@dataclass(frozen=True, eq=False)
class PolySliceFunction:
    side: Side
    components: tuple

    def __post_init__(self):
        check_side(self.side)
        comps = tuple(self.components)
        if not comps:
            raise ValueError("a poly slice function needs at least one component")
        n = comps[0].n
        for f in comps:
            if f.side != self.side:
                raise SideMismatchError("components must all be on the function's side")
            if f.n != n:
                raise DimensionError("components live in different algebras")
        object.__setattr__(self, "components", comps)

    @classmethod
    def of(cls, f: SliceFunction) -> PolySliceFunction:
        """A slice monogenic function seen as a poly function of order one."""
        return cls(f.side, (f,))

    @property
    def n(self) -> int:
        return self.components[0].n

    @property
    def order(self) -> int:
        return len(self.components)

    def is_intrinsic(self, atol: float = 0.0) -> bool:
        return all(f.is_intrinsic(atol) for f in self.components)

    @property
    def is_polynomial(self) -> bool:
        return all(f.is_polynomial for f in self.components)

    def as_side(self, side: Side) -> PolySliceFunction:
        return PolySliceFunction(side, tuple(f.as_side(side) for f in self.components))

    def eval_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        xc = pv_conj_array(x)
        out = self.components[-1].eval_array(x)
        for f in self.components[-2::-1]:
            out = (gp(xc, out) if self.side == "L" else gp(out, xc)) + f.eval_array(x)
        return out

    def __call__(self, x: Paravector | Multivector) -> Multivector:
        return eval_poly_slice(self, x)


def eval_poly_slice(F: PolySliceFunction, x: Paravector | Multivector) -> Multivector:
    arr = _as_array(x)
    if arr.shape[-1] != 1 << F.n:
        raise DimensionError(f"point is not in R_{F.n}")
    return Multivector(F.n, F.eval_array(arr))


def dbar_pow(F: PolySliceFunction, ell: int) -> PolySliceFunction:
    """Closed-form dbar^ell: component k moves to k - ell with factor k!/(k - ell)!."""
    if ell < 0:
        raise ValueError("derivative order must be non-negative")
    if ell >= F.order:
        return PolySliceFunction(F.side, (SliceMonogenicPoly.zero(F.side, F.n),))
    comps = tuple(
        F.components[k].scaled(factorial(k) / factorial(k - ell)) if ell else F.components[k]
        for k in range(ell, F.order)
    )
    return PolySliceFunction(F.side, comps)


def _dbar_stack(F: PolySliceFunction, s: np.ndarray, count: int) -> list[np.ndarray]:
    """Values of dbar^l F at the nodes for l = 0..count-1."""
    return [dbar_pow(F, ell).eval_array(s) for ell in range(count)]


# ----------------------------------------------------------------------------
# Kernels
# ----------------------------------------------------------------------------

def kernel_P_array(ell: int, s: np.ndarray, x: np.ndarray, side: Side) -> np.ndarray:
    factor = (s[..., 0] - x[..., 0]) ** ell / factorial(ell)
    return factor[..., None] * kernel_array(s, x, side)


def kernel_Pi_array(ell: int, s: np.ndarray, x: np.ndarray, side: Side) -> np.ndarray:
    k_s = kernel_array(s, x, side)
    xc = pv_conj_array(x)
    ms = -pv_conj_array(s)
    n = s.shape[-1].bit_length() - 1
    xpow = [scalar_array(np.ones(x.shape[:-1]), n)]
    spow = [scalar_array(np.ones(s.shape[:-1]), n)]
    for _ in range(ell):
        xpow.append(gp(xpow[-1], xc))
        spow.append(gp(spow[-1], ms))
    out = 0.0
    for k in range(ell + 1):
        if side == "L":
            term = gp(gp(xpow[k], k_s), spow[ell - k])
        else:
            term = gp(gp(spow[ell - k], k_s), xpow[k])
        out = out + comb(ell, k) * term
    return out / factorial(ell)


def kernel_P(ell: int, s: Paravector, x: Paravector, side: Side = "L") -> Multivector:
    """(Re(s - x))^ell / ell! times the slice Cauchy kernel."""
    _check_pair(s, x)
    return Multivector(s.n, kernel_P_array(ell, s.coeffs, x.coeffs, check_side(side)))


def kernel_Pi(ell: int, s: Paravector, x: Paravector, side: Side = "L") -> Multivector:
    """Binomial kernel (1/ell!) sum_k C(ell,k) conj(x)^k S^{-1}(s,x) (-conj(s))^(ell-k)."""
    _check_pair(s, x)
    return Multivector(s.n, kernel_Pi_array(ell, s.coeffs, x.coeffs, check_side(side)))


def kernel_pi_complex(ell: int, z: complex, t: complex, j: SliceUnit) -> Multivector:
    """Teodorescu-type kernel (1/ell!) conj(z - t)^ell / (t - z), embedded in C_j."""
    if z == t:
        raise ValueError("kernel is singular at z = t")
    w = np.conj(z - t) ** ell / (t - z) / factorial(ell)
    return j.embed_complex(complex(w))


# ----------------------------------------------------------------------------
# Cauchy formulas
# ----------------------------------------------------------------------------

def _check_args(F: PolySliceFunction, contour: ContourSpec, x: Paravector) -> None:
    if F.n != x.n or contour.n != x.n:
        raise DimensionError("function, contour and point must share n")
    check_inside(contour, x)


def poly_cauchy_P(F: PolySliceFunction, contour: ContourSpec, x: Paravector,
                  quad: PeriodicQuadrature | None = None) -> Multivector:
    """Reproduce F(x) with the kernels (-2)^l P_l S^{-1}."""
    _check_args(F, contour, x)
    xa = x.coeffs
    side = F.side

    def integrand(s, w):
        diff = s[..., 0] - xa[0]
        acc = 0.0
        for ell, g in enumerate(_dbar_stack(F, s, F.order)):
            acc = acc + ((-2.0 * diff) ** ell / factorial(ell))[..., None] * g
        k_s = kernel_array(s, xa, side)
        return gp(gp(k_s, w), acc) if side == "L" else gp(gp(acc, w), k_s)

    return Multivector(x.n, integrate_adaptive(integrand, contour, quad).value)


def poly_cauchy_Pi(F: PolySliceFunction, contour: ContourSpec, x: Paravector,
                   quad: PeriodicQuadrature | None = None) -> Multivector:
    """Reproduce F(x) with the binomial kernels Pi_l S^{-1} and unit weights."""
    _check_args(F, contour, x)
    xa = x.coeffs
    xc = pv_conj_array(xa)
    side = F.side
    M = F.order

    def integrand(s, w):
        ms = -pv_conj_array(s)
        spow = [scalar_array(np.ones(s.shape[:-1]), F.n)]
        for _ in range(M):
            spow.append(gp(spow[-1], ms))
        g = _dbar_stack(F, s, M)
        k_s = kernel_array(s, xa, side)
        out = 0.0
        xpow = scalar_array(1.0, F.n)
        for k in range(M):
            c = 0.0
            for ell in range(k, M):
                coef = comb(ell, k) / factorial(ell)
                if side == "L":
                    c = c + coef * gp(gp(spow[ell - k], w), g[ell])
                else:
                    c = c + coef * gp(gp(g[ell], w), spow[ell - k])
            if side == "L":
                out = out + gp(xpow, gp(k_s, c))
            else:
                out = out + gp(gp(c, k_s), xpow)
            xpow = gp(xpow, xc)
        return out

    return Multivector(x.n, integrate_adaptive(integrand, contour, quad).value)


def poly_cauchy_vanishing(G: PolySliceFunction, F: PolySliceFunction, contour: ContourSpec,
                          M: int | None = None, quad: PeriodicQuadrature | None = None) -> Multivector:
    """Contour integral of sum_l (-1)^l [G dbar^(M-l-1)](s) ds_j [dbar^l F](s); zero in theory."""
    if G.side != "R" or F.side != "L":
        raise SideMismatchError("expects a right function G and a left function F")
    if G.n != F.n or contour.n != F.n:
        raise DimensionError("operands must share n")
    M = M if M is not None else max(F.order, G.order)
    if M < max(F.order, G.order):
        raise ValueError("M must be at least the order of both functions")

    def integrand(s, w):
        out = 0.0
        for ell in range(M):
            left = dbar_pow(G, M - ell - 1).eval_array(s)
            right = dbar_pow(F, ell).eval_array(s)
            out = out + (-1.0) ** ell * gp(gp(left, w), right)
        return out

    res = integrate_adaptive(integrand, contour, quad)
    return Multivector(F.n, 2.0 * np.pi * res.value)


# ----------------------------------------------------------------------------
# Products and representation
# ----------------------------------------------------------------------------

def _require_polys(F: PolySliceFunction) -> None:
    if not F.is_polynomial:
        raise ClassConstraintError("products are formed on polynomial components only")


def circledast(F: PolySliceFunction, G: PolySliceFunction, side: Side | None = None) -> PolySliceFunction:
    """Order N + M - 1 product with components h_l = sum_{k+h=l} f_k * g_h."""
    side = side or F.side
    if F.side != side or G.side != side:
        raise SideMismatchError("both factors must be on the requested side")
    if F.n != G.n:
        raise DimensionError("factors live in different algebras")
    _require_polys(F)
    _require_polys(G)
    comps = []
    for ell in range(F.order + G.order - 1):
        acc = None
        for k in range(max(0, ell - G.order + 1), min(ell, F.order - 1) + 1):
            term = star_product(F.components[k], G.components[ell - k])
            acc = term if acc is None else _poly_add(acc, term)
        comps.append(acc)
    return PolySliceFunction(side, tuple(comps))


def _poly_add(f: SliceMonogenicPoly, g: SliceMonogenicPoly) -> SliceMonogenicPoly:
    d = max(f.degree, g.degree) + 1
    out = np.zeros((d, f.coeffs.shape[1]))
    out[: f.degree + 1] += f.coeffs
    out[: g.degree + 1] += g.coeffs
    return SliceMonogenicPoly(f.side, f.n, out)


def _as_poly(f) -> PolySliceFunction:
    return f if isinstance(f, PolySliceFunction) else PolySliceFunction.of(f)


def pointwise_product(A, B) -> PolySliceFunction:
    """The function x -> A(x) B(x), when it is again poly slice monogenic.

    For left functions the first factor must be intrinsic, for right functions
    the second; then the product equals the circledast product.
    """
    A, B = _as_poly(A), _as_poly(B)
    if A.side != B.side:
        raise SideMismatchError("factors must be on the same side")
    if A.side == "L" and not A.is_intrinsic():
        raise ClassConstraintError("left pointwise products need an intrinsic first factor")
    if A.side == "R" and not B.is_intrinsic():
        raise ClassConstraintError("right pointwise products need an intrinsic second factor")
    return circledast(A, B)


def poly_representation_extend(value_plus: Multivector, value_minus: Multivector,
                               j: SliceUnit, j_x: SliceUnit, side: Side = "L") -> Multivector:
    """Same combination as for slice monogenic functions, applied to poly values."""
    return representation_extend(value_plus, value_minus, j, j_x, side)


# ----------------------------------------------------------------------------
# Finite-difference Cauchy-Riemann residual
# ----------------------------------------------------------------------------

FD_DPS = 40
DEFAULT_FD_GRID = tuple((u, v) for u in (-0.5, 0.0, 0.5) for v in (0.3, 0.6, 0.9))

_MP_FUNCS = {"exp": mpmath.exp, "sin": mpmath.sin, "cos": mpmath.cos}


@lru_cache(maxsize=None)
def _fd_weights(p: int, dps: int) -> tuple:
    """Central weights for the p-th derivative at unit spacing, second-order accurate."""
    r = (p + 1) // 2
    offsets = list(range(-r, r + 1))
    size = len(offsets)
    with mpmath.workdps(dps):
        vander = mpmath.matrix(size, size)
        rhs = mpmath.matrix(size, 1)
        for row in range(size):
            for col, o in enumerate(offsets):
                vander[row, col] = mpmath.mpf(o) ** row
        rhs[p] = mpmath.factorial(p)
        w = mpmath.lu_solve(vander, rhs)
        return tuple(w[i] for i in range(size))


def _slice_terms(F: PolySliceFunction):
    """(k, scalar factor, Clifford coefficient) with F = sum conj(z)^k g(z) A on a slice."""
    terms = []
    for k, f in enumerate(F.components):
        if isinstance(f, IntrinsicElementary):
            terms.append((k, ("fn", f.name, f.scale), scalar_array(1.0, F.n)))
            continue
        for p, a in enumerate(f.coeffs):
            if np.any(a):
                terms.append((k, ("pow", p), a))
    return terms


def _scalar_factor(kind, z):
    if kind[0] == "pow":
        return z ** kind[1]
    return kind[2] * _MP_FUNCS[kind[1]](z)


def dbar_fd_residual(F: PolySliceFunction, j: SliceUnit, M: int, h: float = 1e-3,
                     grid: Sequence[tuple[float, float]] = DEFAULT_FD_GRID,
                     dps: int = FD_DPS) -> float:
    """max over grid points of |(1/2 (D_u + j D_v))^M F| with central differences.

    On the slice C_j every term of F is a complex scalar function times a fixed
    Clifford number, so the stencil is applied to those scalars in extended
    precision.  That keeps rounding far below the O(h^2) truncation error even
    for fourth derivatives at h = 1e-3.
    """
    if M < 0 or h <= 0:
        raise ValueError("need M >= 0 and h > 0")
    if F.n != j.n:
        raise DimensionError("slice unit and function live in different algebras")
    terms = _slice_terms(F)
    if not terms:
        return 0.0
    jc = j.coeffs
    twins = [gp(jc, a) if F.side == "L" else gp(a, jc) for _, _, a in terms]
    r = (M + 1) // 2
    weights = {p: _fd_weights(p, dps) for p in range(M + 1)}
    worst = 0.0
    with mpmath.workdps(dps):
        for u0, v0 in grid:
            step = h * max(1.0, abs(u0), abs(v0))
            hm = mpmath.mpf(step)
            pts = {
                (a, b): mpmath.mpc(mpmath.mpf(u0) + a * hm, mpmath.mpf(v0) + b * hm)
                for a in range(-r, r + 1) for b in range(-r, r + 1)
            }
            total = np.zeros(1 << F.n)
            for (k, kind, a_t), j_t in zip(terms, twins):
                vals = {key: mpmath.conj(z) ** k * _scalar_factor(kind, z) for key, z in pts.items()}
                acc = mpmath.mpc(0)
                for q in range(M + 1):
                    wu, wv = weights[M - q], weights[q]
                    ru, rv = (len(wu) - 1) // 2, (len(wv) - 1) // 2
                    d = mpmath.mpc(0)
                    for ia, ca in enumerate(wu):
                        for ib, cb in enumerate(wv):
                            d += ca * cb * vals[(ia - ru, ib - rv)]
                    acc += comb(M, q) * (1j ** q) * d
                acc = acc / (2 * hm) ** M
                total += float(acc.real) * a_t + float(acc.imag) * j_t
            worst = max(worst, float(np.linalg.norm(total)))
    return worst
