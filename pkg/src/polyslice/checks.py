"""Residual computations for the operator identities (resolvent equations, helper lemma, product rules)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import ps_calc_I, ps_calc_II, series_oracle
from .clifford import Paravector, gp, pv_conj_array, pv_inv_array, same_sphere, scalar_array
from .errors import ClassConstraintError, ContourError, SideMismatchError
from .operators import (
    CliffordOperator,
    ParavectorOperator,
    left_mult_array,
    modified_s_resolvent,
    right_mult_array,
    s_resolvent,
    s_resolvent_series,
)
from .poly_slice import PolySliceFunction, pointwise_product
from .quadrature import ContourSpec, PeriodicQuadrature, integrate_adaptive
from .slice_functions import CONTOUR_MARGIN, SliceFunction


@dataclass(frozen=True)
class Residual:
    """One identity evaluated once; ``asserted`` is False for diagnostic probes."""

    identity: str
    residual: float
    asserted: bool = True


def _norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def _quadratic(p: np.ndarray, a: np.ndarray) -> np.ndarray:
    """p^2 - 2 Re(a) p + |a|^2 for paravectors p and a."""
    n = p.shape[-1].bit_length() - 1
    return gp(p, p) - 2.0 * a[0] * p + scalar_array(float(np.sum(a ** 2)), n)


def resolvent_identity_residuals(T: ParavectorOperator, s: Paravector, q: Paravector,
                                 powers: tuple[int, ...] = (0, 1, 2, 3)) -> list[Residual]:
    """Residual norms of the one- and two-variable S-resolvent equations at (s, q).

    The modified equations use B = conj(T)^k; they are asserted only when the
    components of T commute and are reported as probes otherwise.
    """
    if same_sphere(q, s):
        raise ContourError("q must not lie on the sphere [s]")
    m = T.m
    lt = T.lifted
    eye = np.eye(lt.shape[0])
    sa, qa = s.coeffs, q.coeffs
    sl_s = s_resolvent(T, s, "L").realrep
    sr_s = s_resolvent(T, s, "R").realrep
    sl_q = s_resolvent(T, q, "L").realrep
    out = [
        Residual("left_equation", _norm(right_mult_array(sa, m) @ sl_s - lt @ sl_s - eye)),
        Residual("right_equation", _norm(left_mult_array(sa, m) @ sr_s - sr_s @ lt - eye)),
    ]

    qsq_inv = right_mult_array(pv_inv_array(_quadratic(qa, sa)), m)
    qqs_inv = left_mult_array(pv_inv_array(_quadratic(sa, qa)), m)
    r_q = right_mult_array(qa, m)
    r_qbar = right_mult_array(pv_conj_array(qa), m)
    l_s = left_mult_array(sa, m)
    l_sbar = left_mult_array(pv_conj_array(sa), m)

    def two_variable(lhs, d_sq, d_qs):
        first = qsq_inv @ (r_q @ d_sq - l_sbar @ d_sq)
        # with this sign both arrangements reduce to (s - T)^{-1}(q - T)^{-1}
        # for commuting scalars
        second = qqs_inv @ (l_s @ d_qs - r_qbar @ d_qs)
        return _norm(lhs - first), _norm(lhs - second)

    a, b = two_variable(sr_s @ sl_q, sr_s - sl_q, sl_q - sr_s)
    out += [Residual("two_variable_1", a), Residual("two_variable_2", b)]

    tb = T.lifted_conj
    for k in powers:
        bk = np.linalg.matrix_power(tb, k)
        B = CliffordOperator(T.n, m, bk)
        mod_l = modified_s_resolvent(T, s, B, "L").realrep
        mod_r = modified_s_resolvent(T, s, B, "R").realrep
        a, b = two_variable(sr_s @ bk @ sl_q, sr_s @ bk - bk @ sl_q, bk @ sl_q - sr_s @ bk)
        flag = T.commuting
        out += [
            Residual(f"modified_left_equation_k{k}",
                     _norm(right_mult_array(sa, m) @ mod_l - lt @ mod_l - bk), flag),
            Residual(f"modified_right_equation_k{k}",
                     _norm(left_mult_array(sa, m) @ mod_r - mod_r @ lt - bk), flag),
            Residual(f"modified_commutes_k{k}", _norm(mod_l - bk @ sl_s), flag),
            Residual(f"modified_two_variable_1_k{k}", a, flag),
            Residual(f"modified_two_variable_2_k{k}", b, flag),
        ]
    return out


def series_tail_bound(T: ParavectorOperator, s: Paravector, terms: int) -> float:
    """Geometric tail of the resolvent series after ``terms`` terms, using the component-norm sum."""
    ratio = T.component_norm / s.norm()
    return ratio ** (terms + 1) / (s.norm() * (1.0 - ratio))


def series_pinning_residuals(T: ParavectorOperator, s: Paravector, terms: int = 60,
                             B: CliffordOperator | None = None) -> list[tuple[str, float, float]]:
    """(name, |closed form - truncated series|, bound) for both sides and, if given, the modified resolvent."""
    bound = 2.0 * series_tail_bound(T, s, terms)
    out = []
    for side in "LR":
        closed = s_resolvent(T, s, side)
        out.append((f"series_{side}", closed.dist(s_resolvent_series(T, s, terms, side)), bound))
    if B is not None:
        closed = modified_s_resolvent(T, s, B, "L")
        # the modified series carries the extra factor ||B||
        out.append(("series_modified_L", closed.dist(s_resolvent_series(T, s, terms, "L", B)),
                    bound * max(1.0, B.norm())))
    return out


def helper_lemma_integral(B: CliffordOperator, f: SliceFunction, contour: ContourSpec,
                          q: Paravector, quad: PeriodicQuadrature | None = None) -> CliffordOperator:
    """(1/2 pi) integral of L(f(s) ds_j) R(Q_s(q)^{-1}) (L(conj s) B - R(q) B)."""
    m = B.m
    b = B.realrep
    qa = q.coeffs
    rq_b = right_mult_array(qa, m) @ b
    q2 = gp(qa, qa)

    def integrand(s, w):
        n = s.shape[-1].bit_length() - 1
        quad_ = q2 - 2.0 * s[..., :1] * qa + scalar_array(np.sum(s ** 2, axis=-1), n)
        lead = left_mult_array(gp(f.eval_array(s), w), m)
        tail = right_mult_array(pv_inv_array(quad_), m)
        inner = left_mult_array(pv_conj_array(s), m) @ b - rq_b
        return lead @ tail @ inner

    return CliffordOperator(B.n, m, integrate_adaptive(integrand, contour, quad).value)


def helper_lemma_check(B: CliffordOperator, f: SliceFunction, contour: ContourSpec, q: Paravector,
                       quad: PeriodicQuadrature | None = None) -> float:
    """|| integral - R(f(q)) B ||, for intrinsic f and q strictly inside the contour."""
    if not f.is_intrinsic():
        raise ClassConstraintError("the helper lemma is stated for intrinsic f")
    v = float(np.linalg.norm(q.vector))
    if not contour.encloses(q.re, v, CONTOUR_MARGIN * contour.radius):
        raise ContourError("q must lie strictly inside the contour")
    lhs = helper_lemma_integral(B, f, contour, q, quad)
    rhs = right_mult_array(f.eval_array(q.coeffs), B.m) @ B.realrep
    return _norm(lhs.realrep - rhs)


FIRST_CASES = ("Ia", "Ib", "IIa", "IIb", "III")
SECOND_CASES = ("second:I", "second:II")


def _poly(f) -> PolySliceFunction:
    return f if isinstance(f, PolySliceFunction) else PolySliceFunction.of(f)


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise ClassConstraintError(msg)


def product_rule_check(T: ParavectorOperator, case: str, F, g, contour: ContourSpec | None = None,
                       diagnostic: bool = False) -> float:
    """|| (product)(T) - (composition of calculi) || for one product-rule variant.

    ``case`` is one of Ia, Ib, IIa, IIb, III (first case) or I, II (second case,
    prefixed ``second:``).  Non-commuting T is refused unless ``diagnostic``.
    """
    if not T.commuting and not diagnostic:
        raise ClassConstraintError("product rules are asserted for commuting components only")
    F, g = _poly(F), _poly(g)

    def calc(H):
        return ps_calc_I(H, T, contour)

    if case == "Ia":
        _need(F.side == g.side == "L", "case Ia is a left identity")
        _need(F.is_intrinsic() and g.order == 1, "case Ia needs F intrinsic and g slice monogenic")
        return calc(pointwise_product(F, g)).dist(calc(F) @ calc(g))
    if case == "Ib":
        _need(F.side == g.side == "L", "case Ib is a left identity")
        _need(g.is_intrinsic() and g.order == 1, "case Ib needs g intrinsic slice monogenic")
        return calc(pointwise_product(g, F)).dist(calc(g) @ calc(F))
    if case == "IIa":
        _need(F.side == g.side == "R", "case IIa is a right identity")
        _need(F.is_intrinsic() and g.order == 1, "case IIa needs F intrinsic and g slice monogenic")
        return calc(pointwise_product(g, F)).dist(calc(g) @ calc(F))
    if case == "IIb":
        _need(F.side == g.side == "R", "case IIb is a right identity")
        _need(g.is_intrinsic() and g.order == 1, "case IIb needs g intrinsic slice monogenic")
        return calc(pointwise_product(F, g)).dist(calc(F) @ calc(g))
    if case == "III":
        _need(F.is_intrinsic() and g.is_intrinsic() and g.order == 1,
              "case III needs F and g intrinsic")
        Fl, gl = F.as_side("L"), g.as_side("L")
        ft, gt = calc(Fl), calc(gl)
        values = [
            calc(pointwise_product(gl, Fl)),
            calc(pointwise_product(Fl, gl)),
            ft @ gt,
            gt @ ft,
            ps_calc_I(pointwise_product(F.as_side("R"), g.as_side("R")), T, contour),
        ]
        return max(a.dist(b) for a in values for b in values)
    if case == "second:I":
        _need(F.side == g.side == "L", "second case I is a left identity")
        _need(F.is_intrinsic(), "second case I needs F intrinsic")
        return calc(pointwise_product(F, g)).dist(calc(F) @ calc(g))
    if case == "second:II":
        _need(F.side == g.side == "R", "second case II is a right identity")
        _need(g.is_intrinsic(), "second case II needs G intrinsic")
        return calc(pointwise_product(F, g)).dist(calc(F) @ calc(g))
    raise ValueError(f"unknown product-rule case {case!r}")


def calculus_agreement(F: PolySliceFunction, T: ParavectorOperator, contour: ContourSpec | None = None
                       ) -> dict[str, float]:
    """Pairwise distances between formulation I, formulation II and the series oracle."""
    a = ps_calc_I(F, T, contour)
    b = ps_calc_II(F, T, contour)
    out = {"I_vs_II": a.dist(b)}
    if F.is_polynomial:
        c = series_oracle(F, T)
        out["I_vs_series"] = a.dist(c)
        out["II_vs_series"] = b.dist(c)
    return out


def intrinsic_side_agreement(F: PolySliceFunction, T: ParavectorOperator,
                             contour: ContourSpec | None = None) -> float:
    if not F.is_intrinsic():
        raise SideMismatchError("left and right calculi only coincide for intrinsic functions")
    return ps_calc_I(F.as_side("L"), T, contour).dist(ps_calc_I(F.as_side("R"), T, contour))

