import numpy as np
import pytest

from polyslice import slice_functions
from polyslice.clifford import Paravector, SliceUnit, gp, pv_inv_array
from polyslice.errors import NoConvergence
from polyslice.quadrature import (
    ContourSpec,
    PeriodicQuadrature,
    circle_nodes,
    integrate_adaptive,
    pairwise_sum,
)
from polyslice.sampling import random_interior_point, random_poly
from polyslice.slice_functions import SliceMonogenicPoly, eval_slice_poly, slice_cauchy_integral


def test_four_nodes_unit_circle():
    c = ContourSpec(SliceUnit.basis(1, 2), 0.0, 1.0)
    pts, w = circle_nodes(c, 4)
    # nodes 1, e1, -1, -e1 in bitmask order (1, e1, e2, e12)
    expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [-1, 0, 0, 0], [0, -1, 0, 0]], float)
    assert np.allclose(pts, expected, atol=1e-15)
    # weights (pi/2) e^{j theta}
    assert np.allclose(w, np.pi / 2 * expected, atol=1e-15)


@pytest.mark.parametrize("n_nodes", [8, 16, 64])
def test_weights_sum_to_zero(n_nodes):
    c = ContourSpec(SliceUnit.from_vector([1.0, -2.0, 0.5]), 0.3, 1.7)
    _, w = circle_nodes(c, n_nodes)
    assert np.allclose(w.sum(axis=0), 0.0, atol=1e-14)


def test_cauchy_integral_of_one():
    c = ContourSpec(SliceUnit.basis(2, 2), 0.0, 1.0)
    pts, w = circle_nodes(c, 16)
    total = gp(w, pv_inv_array(pts)).sum(axis=0) / (2 * np.pi)
    # ds_j / s = (-j) i dtheta = dtheta on the unit circle
    assert np.allclose(total, [1, 0, 0, 0], atol=1e-14)


@pytest.mark.parametrize("p", [-3, -2, -1, 0, 1, 2, 3])
@pytest.mark.parametrize("n_nodes", [8, 32])
def test_power_exactness(p, n_nodes):
    r = 1.3
    c = ContourSpec(SliceUnit.basis(1, 2), 0.0, r)
    pts, w = circle_nodes(c, n_nodes)
    powers = np.tile([1.0, 0, 0, 0], (n_nodes, 1))
    base = pts if p >= 0 else pv_inv_array(pts)
    for _ in range(abs(p)):
        powers = gp(powers, base)
    total = gp(w, powers).sum(axis=0) / (2 * np.pi)
    expected = [1.0 if p == -1 else 0.0, 0, 0, 0]
    assert np.allclose(total, expected, atol=1e-13)


def test_constant_integrand_converges_at_first_doubling():
    c = ContourSpec(SliceUnit.basis(1, 2), 0.0, 1.0)
    # contributions must be linear in the weight; |ds| integrates to 2 pi r
    res = integrate_adaptive(lambda s, w: np.linalg.norm(w, axis=1)[:, None] * np.ones(3), c)
    assert res.nodes == 64
    assert res.error < 1e-15
    assert np.allclose(res.value, 1.0, atol=1e-15)


def _spy_quadrature(monkeypatch):
    seen = []
    orig = slice_functions.integrate_adaptive

    def spy(integrand, contour, quad=None):
        res = orig(integrand, contour, quad)
        seen.append(res)
        return res

    monkeypatch.setattr(slice_functions, "integrate_adaptive", spy)
    return seen


def test_kernel_integrand_with_margin_converges_quickly(monkeypatch):
    seen = _spy_quadrature(monkeypatch)
    c = ContourSpec(SliceUnit.basis(1, 3), 0.0, 1.0)
    f = SliceMonogenicPoly.real("L", 3, [1.0, -0.5, 0.25])
    x = Paravector(3, [0.3, 0.0, 0.2, 0.0])  # distance 0.36 from the center, margin above 0.5 r
    val = slice_cauchy_integral(f, c, x)
    assert seen[0].nodes < 512
    assert val.allclose(eval_slice_poly(f, x), 1e-10)


def test_near_singular_contour_raises_no_convergence():
    c = ContourSpec(SliceUnit.basis(1, 2), 0.0, 1.0, PeriodicQuadrature(n0=32, n_max=1024))
    f = SliceMonogenicPoly.real("L", 2, [1.0, 1.0])
    x = Paravector(2, [0.999, 0.0, 0.0])
    with pytest.raises(NoConvergence) as info:
        slice_cauchy_integral(f, c, x)
    assert info.value.nodes == 1024
    assert info.value.estimate > 0
    assert info.value.value.shape == (4,)


def test_error_estimate_bounds_true_error(monkeypatch):
    seen = _spy_quadrature(monkeypatch)
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = 2 + int(rng.integers(0, 2))
        f = random_poly(rng, "L", n, 4)
        c = ContourSpec(SliceUnit.basis(1, n), 0.0, 1.5, PeriodicQuadrature(n0=16, tol=1e-6))
        x = random_interior_point(rng, c, 0.8)
        val = slice_cauchy_integral(f, c, x)
        true_err = (val - eval_slice_poly(f, x)).norm()
        # the additive term is a roundoff floor
        assert true_err <= 10 * seen[-1].error + 1e-13


def test_pairwise_sum_matches_sum_and_is_order_deterministic():
    rng = np.random.default_rng(3)
    terms = rng.standard_normal((1000, 4))
    assert np.allclose(pairwise_sum(terms), terms.sum(axis=0), atol=1e-12)
    assert np.array_equal(pairwise_sum(terms), pairwise_sum(terms.copy()))


def test_quadrature_settings_validated():
    with pytest.raises(ValueError):
        PeriodicQuadrature(n0=24)
    with pytest.raises(ValueError):
        PeriodicQuadrature(n0=64, n_max=32)
    with pytest.raises(ValueError):
        PeriodicQuadrature(tol=0.0)
    with pytest.raises(ValueError):
        ContourSpec(SliceUnit.basis(1, 2), 0.0, -1.0)
