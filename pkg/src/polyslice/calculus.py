"""S- and PS-functional calculus by contour quadrature, plus the series oracle."""

from __future__ import annotations

from math import comb, factorial

import numpy as np

from .clifford import SliceUnit, gp, pv_conj_array, scalar_array
from .errors import ContourError, UnsupportedRepresentationError
from .operators import (
    CliffordOperator,
    ParavectorOperator,
    left_mult_array,
    right_mult_array,
    s_resolvent_array,
    s_spectrum_scan,
)
from .poly_slice import PolySliceFunction, dbar_pow
from .quadrature import ContourSpec, PeriodicQuadrature, integrate_adaptive
from .slice_functions import Side, SliceFunction, check_side

RADIUS_FACTOR = 1.5


def default_contour(T: ParavectorOperator, j: SliceUnit | None = None,
                    quad: PeriodicQuadrature | None = None) -> ContourSpec:
    """Circle about 0 with radius 1.5 ||lift(T)||_2, which contains the whole S-spectrum."""
    j = j or SliceUnit.basis(1, T.n)
    radius = RADIUS_FACTOR * T.lift_norm
    if radius == 0.0:
        radius = 1.0
    return ContourSpec(j, 0.0, radius, quad or PeriodicQuadrature())


def check_contour(T: ParavectorOperator, contour: ContourSpec) -> None:
    """Make sure the circle encloses the S-spectrum.

    The spectrum lies in the closed ball of radius ||lift(T)||_2; only when the
    circle does not contain that ball is the spectrum scanned.
    """
    if contour.n != T.n:
        raise ContourError("contour and operator live in different algebras")
    if abs(contour.center) + T.lift_norm < contour.radius:
        return
    est = s_spectrum_scan(T)
    for u, v, _ in est.points:
        if not contour.encloses(u, v, 1e-6 * contour.radius):
            raise ContourError(f"spectral sphere at (u, v) = ({u:.6g}, {v:.6g}) is not enclosed")


def _stacked_integral(T: ParavectorOperator, contour: ContourSpec, side: Side,
                      scalars, quad: PeriodicQuadrature | None) -> np.ndarray:
    """Integrals of R(c_k(s)) S_L^{-1}(s,T) (left) or L(c_k(s)) S_R^{-1}(s,T) (right).

    ``scalars(s, w)`` returns the Clifford-valued factors c_k at the nodes as a
    (K, N, 2^n) array; the result has shape (K, D, D).
    """
    m = T.m

    def integrand(s, w):
        res = s_resolvent_array(T, s, side)
        c = scalars(s, w)
        if side == "L":
            mult = right_mult_array(c, m)
            out = mult @ res[None]
        else:
            mult = left_mult_array(c, m)
            out = mult @ res[None]
        return np.moveaxis(out, 1, 0)

    return integrate_adaptive(integrand, contour, quad).value


def _prepare(T: ParavectorOperator, contour: ContourSpec | None, side: Side) -> ContourSpec:
    check_side(side)
    contour = contour or default_contour(T)
    check_contour(T, contour)
    return contour


def ps_calc_I(F: PolySliceFunction, T: ParavectorOperator, contour: ContourSpec | None = None,
              side: Side | None = None, quad: PeriodicQuadrature | None = None) -> CliffordOperator:
    """F(T) from the binomial poly kernels and the closed-form derivatives of F."""
    side = side or F.side
    if F.side != side:
        F = F.as_side(side)
    contour = _prepare(T, contour, side)
    M = F.order
    derivs = [dbar_pow(F, ell) for ell in range(M)]

    def scalars(s, w):
        ms = -pv_conj_array(s)
        spow = [scalar_array(np.ones(s.shape[:-1]), T.n)]
        for _ in range(M):
            spow.append(gp(spow[-1], ms))
        g = [d.eval_array(s) for d in derivs]
        out = []
        for k in range(M):
            acc = 0.0
            for ell in range(k, M):
                coef = comb(ell, k) / factorial(ell)
                if side == "L":
                    acc = acc + coef * gp(gp(spow[ell - k], w), g[ell])
                else:
                    acc = acc + coef * gp(gp(g[ell], w), spow[ell - k])
            out.append(acc)
        return np.stack(out)

    parts = _stacked_integral(T, contour, side, scalars, quad)
    return CliffordOperator(T.n, T.m, _combine_conj_powers(T, parts, side))


def ps_calc_II(F: PolySliceFunction, T: ParavectorOperator, contour: ContourSpec | None = None,
               side: Side | None = None, quad: PeriodicQuadrature | None = None) -> CliffordOperator:
    """F(T) = sum_l conj(T)^l f_l(T) with each f_l(T) from the S-functional calculus."""
    side = side or F.side
    if F.side != side:
        F = F.as_side(side)
    contour = _prepare(T, contour, side)

    def scalars(s, w):
        if side == "L":
            return np.stack([gp(w, f.eval_array(s)) for f in F.components])
        return np.stack([gp(f.eval_array(s), w) for f in F.components])

    parts = _stacked_integral(T, contour, side, scalars, quad)
    return CliffordOperator(T.n, T.m, _combine_conj_powers(T, parts, side))


def s_functional_calc(f: SliceFunction, T: ParavectorOperator, contour: ContourSpec | None = None,
                      side: Side | None = None, quad: PeriodicQuadrature | None = None) -> CliffordOperator:
    return ps_calc_II(PolySliceFunction.of(f), T, contour, side, quad)


def _combine_conj_powers(T: ParavectorOperator, parts: np.ndarray, side: Side) -> np.ndarray:
    tb = T.lifted_conj
    power = np.eye(tb.shape[0])
    out = np.zeros_like(parts[0])
    for part in parts:
        out += power @ part if side == "L" else part @ power
        power = power @ tb
    return out


def series_oracle(F: PolySliceFunction, T: ParavectorOperator, side: Side | None = None) -> CliffordOperator:
    """Left: sum_l conj(T)^l sum_u T^u R(A_{l,u}).  Right: sum_l (sum_u L(A_{l,u}) T^u) conj(T)^l."""
    side = side or F.side
    if F.side != side:
        F = F.as_side(side)
    if not F.is_polynomial:
        raise UnsupportedRepresentationError("the series oracle needs polynomial components")
    lt = T.lifted
    parts = []
    for f in F.components:
        acc = np.zeros_like(lt)
        tu = np.eye(lt.shape[0])
        for a in f.coeffs:
            if side == "L":
                acc += tu @ right_mult_array(a, T.m)
            else:
                acc += left_mult_array(a, T.m) @ tu
            tu = tu @ lt
        parts.append(acc)
    return CliffordOperator(T.n, T.m, _combine_conj_powers(T, np.stack(parts), side))


def calc(F, T: ParavectorOperator, method: str = "I", contour: ContourSpec | None = None,
         side: Side | None = None) -> CliffordOperator:
    """Dispatch on ``method`` in {"I", "II", "series"}."""
    F = F if isinstance(F, PolySliceFunction) else PolySliceFunction.of(F)
    if method == "I":
        return ps_calc_I(F, T, contour, side)
    if method == "II":
        return ps_calc_II(F, T, contour, side)
    if method == "series":
        return series_oracle(F, T, side)
    raise ValueError(f"unknown method {method!r}")
