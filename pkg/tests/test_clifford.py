import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from polyslice.clifford import (
    Multivector,
    Paravector,
    SliceUnit,
    blade_sign,
    gp,
    mv_mul,
    pv_conj,
    pv_decompose,
    pv_inverse,
    random_unit,
    same_sphere,
    sign_table,
)
from polyslice.errors import DimensionError, SingularError
from strategies import dims, multivectors, paravectors, seeds

E = Multivector.generator


def test_generator_relations():
    n = 3
    e12 = Multivector.blade(0b11, n)
    assert mv_mul(E(1, n), E(2, n)) == e12
    assert mv_mul(E(2, n), E(1, n)) == -e12
    assert mv_mul(E(1, n), E(1, n)) == Multivector.scalar(-1.0, n)


def test_one_plus_e1_times_one_minus_e1():
    one = Multivector.scalar(1.0, 2)
    assert mv_mul(one + E(1, 2), one - E(1, 2)) == Multivector.scalar(2.0, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sign_table_matches_word_reduction(n):
    d = 1 << n
    for a, b in itertools.product(range(d), range(d)):
        sign, word = oracles.word_product(oracles.blade_indices(a), oracles.blade_indices(b))
        assert oracles.blade_mask(word) == a ^ b
        assert blade_sign(a, b) == sign
    assert np.array_equal(sign_table(n), np.array([[blade_sign(a, b) for b in range(d)] for a in range(d)]))


def test_quaternion_isomorphism_n2():
    # e1 -> i, e2 -> j, e12 -> k
    rng = np.random.default_rng(0)
    for _ in range(50):
        p, q = rng.standard_normal(4), rng.standard_normal(4)
        assert np.allclose(gp(p, q), oracles.quaternion_mul(p, q), atol=1e-14)


@given(n=dims, seed=seeds)
def test_product_matches_reference(n, seed):
    rng = np.random.default_rng(seed)
    a, b = rng.integers(-4, 5, (2, 1 << n)).astype(float)
    assert np.array_equal(gp(a, b), oracles.mv_mul(a, b))


@given(n=st.sampled_from([2, 3, 4]), seed=seeds)
def test_associativity_integer_coefficients(n, seed):
    rng = np.random.default_rng(seed)
    a, b, c = rng.integers(-5, 6, (3, 1 << n)).astype(float)
    assert np.array_equal(gp(gp(a, b), c), gp(a, gp(b, c)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sign_cocycle_exhaustive(n):
    sg = sign_table(n).astype(int)
    idx = np.arange(1 << n)
    a, b, c = np.meshgrid(idx, idx, idx, indexing="ij")
    assert np.array_equal(sg[a, b] * sg[a ^ b, c], sg[b, c] * sg[a, b ^ c])


def test_wrong_length_and_n_rejected():
    with pytest.raises(DimensionError):
        Multivector(2, np.zeros(5))
    with pytest.raises(DimensionError):
        Multivector(6, np.zeros(64))
    with pytest.raises(DimensionError):
        Multivector.scalar(1.0, 2) + Multivector.scalar(1.0, 3)


def test_conjugate_examples():
    x = Paravector(2, [1.0, 1.0, 0.0])
    assert pv_conj(x) == Paravector(2, [1.0, -1.0, 0.0])
    y = Paravector(2, [2.0, 1.0, 1.0])
    assert mv_mul(y, pv_conj(y)) == Multivector.scalar(6.0, 2)


@given(paravectors())
def test_conjugation_is_involution(x):
    assert pv_conj(pv_conj(x)) == x


@given(paravectors())
def test_norm_multiplicative_on_embedding(x):
    prod = mv_mul(x, pv_conj(x))
    assert abs(prod.scalar_part - x.norm() ** 2) <= 1e-14 * max(1.0, x.norm() ** 2)
    assert np.allclose(prod.coeffs[1:], 0.0, atol=1e-14 * max(1.0, x.norm() ** 2))


def test_inverse_examples():
    assert pv_inverse(Paravector(2, [1.0, 1.0, 0.0])) == Paravector(2, [0.5, -0.5, 0.0])
    assert pv_inverse(Paravector.real(4.0, 3)) == Paravector.real(0.25, 3)
    x = Paravector(2, [0.0, 1.0, 1.0])
    inv = pv_inverse(x)
    assert inv == Paravector(2, [0.0, -0.5, -0.5])
    assert mv_mul(x, inv).allclose(Multivector.scalar(1.0, 2), 1e-15)
    with pytest.raises(SingularError):
        pv_inverse(Paravector(3, np.zeros(4)))


@given(paravectors(min_norm=1e-2))
def test_inverse_is_two_sided(x):
    one = Multivector.scalar(1.0, x.n)
    inv = pv_inverse(x)
    assert mv_mul(x, inv).allclose(one, 1e-12)
    assert mv_mul(inv, x).allclose(one, 1e-12)


def test_decompose_examples():
    c = pv_decompose(Paravector(2, [3.0, 0.0, 4.0]))
    assert (c.u, c.v) == (3.0, 4.0)
    assert np.array_equal(c.j.components, [0.0, 1.0])
    real = pv_decompose(Paravector.real(5.0, 2), default_j=SliceUnit.basis(2, 2))
    assert (real.u, real.v) == (5.0, 0.0)
    assert np.array_equal(real.j.components, [0.0, 1.0])
    c = pv_decompose(Paravector(2, [1.0, 1.0, 1.0]))
    assert c.v == pytest.approx(np.sqrt(2.0), rel=1e-15)
    assert np.allclose(c.j.components, [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-16)


@given(paravectors())
def test_decompose_recompose(x):
    c = pv_decompose(x)
    assert c.v >= 0.0
    assert np.allclose(c.recompose().parts, x.parts, atol=1e-14 * max(1.0, x.norm()))


@given(n=dims, seed=seeds)
def test_random_unit_squares_to_minus_one(n, seed):
    j = random_unit(np.random.default_rng(seed), n)
    assert mv_mul(j.to_multivector(), j.to_multivector()).allclose(Multivector.scalar(-1.0, n), 1e-15)


def test_random_unit_reproducible_and_normalized():
    a = random_unit(np.random.default_rng(7), 3)
    b = random_unit(np.random.default_rng(7), 3)
    assert np.array_equal(a.components, b.components)
    rng = np.random.default_rng(1)
    norms = [np.linalg.norm(random_unit(rng, 3).components) for _ in range(10_000)]
    assert abs(np.mean(norms) - 1.0) < 1e-12


def test_slice_unit_requires_unit_norm():
    with pytest.raises(ValueError):
        SliceUnit(2, [1.0, 1.0])


def test_same_sphere():
    s = Paravector(3, [1.0, 2.0, 0.0, 0.0])
    assert same_sphere(s, Paravector(3, [1.0, 0.0, 0.0, 2.0]))
    assert not same_sphere(s, Paravector(3, [1.0, 0.0, 0.0, 2.1]))


@given(multivectors(n=3), multivectors(n=3))
def test_multivector_arithmetic_consistent(a, b):
    assert np.allclose((a * b).coeffs, oracles.mv_mul(a.coeffs, b.coeffs), atol=1e-12)
    assert np.allclose((a + b - b).coeffs, a.coeffs, atol=1e-12)
