import numpy as np
import pytest
from hypothesis import given

from polyslice.calculus import (
    calc,
    check_contour,
    default_contour,
    ps_calc_I,
    ps_calc_II,
    s_functional_calc,
    series_oracle,
)
from polyslice.checks import calculus_agreement, intrinsic_side_agreement
from polyslice.clifford import Multivector, Paravector, SliceUnit, random_unit
from polyslice.errors import ContourError, UnsupportedRepresentationError
from polyslice.operators import CliffordOperator, ParavectorOperator, left_mult_op, right_mult_op
from polyslice.poly_slice import PolySliceFunction, eval_poly_slice
from polyslice.quadrature import ContourSpec
from polyslice.sampling import random_commuting_operator, random_operator, random_poly, random_poly_slice
from polyslice.slice_functions import IntrinsicElementary, SliceMonogenicPoly
from strategies import generators


def _real(side, n, *coeff_lists):
    return PolySliceFunction(side, tuple(SliceMonogenicPoly.real(side, n, c) for c in coeff_lists))


def test_s_calculus_examples():
    rng = np.random.default_rng(0)
    T = random_operator(rng, 2, 2)
    d = T.lifted.shape[0]
    for side in "LR":
        one = SliceMonogenicPoly.real(side, 2, [1.0])
        x = SliceMonogenicPoly.real(side, 2, [0.0, 1.0])
        assert np.linalg.norm(s_functional_calc(one, T).realrep - np.eye(d), 2) < 1e-12
        assert np.linalg.norm(s_functional_calc(x, T).realrep - T.lifted, 2) < 1e-12
    c = ContourSpec(SliceUnit.basis(1, 2), 0.0, 2.0 * T.component_norm)
    sq = SliceMonogenicPoly.real("L", 2, [0.0, 0.0, 1.0])
    assert np.linalg.norm(s_functional_calc(sq, T, c).realrep - T.lifted @ T.lifted, 2) < 1e-9


def test_conjugate_function_gives_conjugate_operator():
    rng = np.random.default_rng(1)
    T = random_operator(rng, 3, 2)
    for side in "LR":
        F = _real(side, 3, [0.0], [1.0])
        for method in ("I", "II", "series"):
            assert np.linalg.norm(calc(F, T, method).realrep - T.lifted_conj, 2) < 1e-11


def test_series_oracle_examples():
    rng = np.random.default_rng(2)
    T = random_operator(rng, 2, 3)
    a = Multivector(2, rng.standard_normal(4))
    F = PolySliceFunction.of(SliceMonogenicPoly.from_multivectors("L", [a]))
    assert np.allclose(series_oracle(F, T).realrep, right_mult_op(a, 3).realrep)
    Fr = PolySliceFunction.of(SliceMonogenicPoly.from_multivectors("R", [a]))
    assert np.allclose(series_oracle(Fr, T).realrep, left_mult_op(a, 3).realrep)


@given(generators())
def test_series_oracle_scalar_reduction(rng):
    n = int(rng.integers(2, 4))
    q = Paravector(n, rng.standard_normal(n + 1))
    T = ParavectorOperator.from_paravectors([q])
    one = np.zeros((1 << n, 1))
    one[0, 0] = 1.0
    for side in "LR":
        F = random_poly_slice(rng, side, n, 2, 3)
        image = series_oracle(F, T).apply(one)[:, 0]
        assert np.allclose(image, eval_poly_slice(F, q).coeffs, atol=1e-10 * max(1.0, q.norm() ** 5))


def test_order_one_methods_coincide_with_s_calculus():
    rng = np.random.default_rng(3)
    T = random_operator(rng, 3, 2)
    f = random_poly(rng, "L", 3, 4)
    F = PolySliceFunction.of(f)
    base = s_functional_calc(f, T)
    assert ps_calc_I(F, T).dist(base) < 1e-12
    assert ps_calc_II(F, T).dist(base) < 1e-12


@given(generators())
def test_calculus_matches_series_for_commuting_operators(rng):
    n, m = int(rng.integers(2, 4)), int(rng.integers(1, 4))
    T = random_commuting_operator(rng, n, m)
    side = "LR"[int(rng.integers(0, 2))]
    F = random_poly_slice(rng, side, n, 3, 3)
    oracle = series_oracle(F, T)
    scale = max(1.0, oracle.norm())
    assert ps_calc_I(F, T).dist(oracle) < 1e-8 * scale
    assert ps_calc_II(F, T).dist(oracle) < 1e-8 * scale


def test_methods_agree_on_generic_operator():
    rng = np.random.default_rng(4)
    T = random_operator(rng, 2, 3)
    F = random_poly_slice(rng, "L", 2, 3, 2)
    report = calculus_agreement(F, T)
    assert max(report.values()) < 1e-8


def test_contour_unit_and_radius_independence():
    rng = np.random.default_rng(5)
    T = random_operator(rng, 3, 2)
    F = random_poly_slice(rng, "R", 3, 2, 3)
    ref = ps_calc_I(F, T)
    for _ in range(3):
        c = ContourSpec(random_unit(rng, 3), 0.0, rng.uniform(1.2, 3.0) * T.lift_norm)
        assert ps_calc_I(F, T, c).dist(ref) < 1e-9
        assert ps_calc_II(F, T, c).dist(ref) < 1e-9


def test_non_polynomial_function():
    rng = np.random.default_rng(6)
    T = random_commuting_operator(rng, 2, 2, norm=0.5)
    f = IntrinsicElementary("exp", "L", 2)
    got = s_functional_calc(f, T)
    # exp by its Taylor series in lift(T)
    expected = np.eye(T.lifted.shape[0])
    term = np.eye(T.lifted.shape[0])
    for k in range(1, 30):
        term = term @ T.lifted / k
        expected = expected + term
    assert np.linalg.norm(got.realrep - expected, 2) < 1e-10
    with pytest.raises(UnsupportedRepresentationError):
        series_oracle(PolySliceFunction.of(f), T)


def test_intrinsic_functions_agree_across_sides():
    rng = np.random.default_rng(7)
    T = random_commuting_operator(rng, 3, 2)
    F = random_poly_slice(rng, "L", 3, 2, 3, intrinsic=True)
    assert intrinsic_side_agreement(F, T) < 1e-8


def test_default_contour_encloses_spectrum():
    rng = np.random.default_rng(8)
    T = random_operator(rng, 2, 3, norm=2.0)
    c = default_contour(T)
    assert c.radius == pytest.approx(3.0)
    check_contour(T, c)
    zero = default_contour(ParavectorOperator.zero(2, 1))
    assert zero.radius == 1.0


def test_contour_missing_spectrum_raises():
    T = ParavectorOperator.from_paravectors([Paravector(2, [0.0, 0.0, 0.0]), Paravector(2, [3.0, 0.0, 0.0])])
    c = ContourSpec(SliceUnit.basis(1, 2), 0.0, 2.0)
    with pytest.raises(ContourError):
        s_functional_calc(SliceMonogenicPoly.real("L", 2, [1.0]), T, c)
    with pytest.raises(ValueError):
        calc(_real("L", 2, [1.0]), T, "III")


def test_result_is_clifford_operator_of_right_shape():
    T = random_operator(np.random.default_rng(9), 3, 2)
    out = calc(_real("L", 3, [1.0, 2.0], [0.5]), T)
    assert isinstance(out, CliffordOperator)
    assert out.realrep.shape == (16, 16)
