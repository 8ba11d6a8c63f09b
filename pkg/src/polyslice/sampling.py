"""Seeded random generators for test and verification instances."""

from __future__ import annotations

import numpy as np

from .clifford import Multivector, Paravector, scalar_array
from .operators import CliffordOperator, ParavectorOperator, clifford_mult_bases
from .poly_slice import PolySliceFunction
from .quadrature import ContourSpec
from .slice_functions import Side, SliceMonogenicPoly


def random_multivector(rng: np.random.Generator, n: int, scale: float = 1.0) -> Multivector:
    return Multivector(n, scale * rng.standard_normal(1 << n))


def random_paravector(rng: np.random.Generator, n: int, scale: float = 1.0) -> Paravector:
    return Paravector(n, scale * rng.standard_normal(n + 1))


def random_paravector_with_norm(rng: np.random.Generator, n: int, radius: float) -> Paravector:
    g = rng.standard_normal(n + 1)
    return Paravector(n, radius * g / np.linalg.norm(g))


def random_poly(rng: np.random.Generator, side: Side, n: int, degree: int,
                intrinsic: bool = False, scale: float = 1.0) -> SliceMonogenicPoly:
    """Unit-scale coefficients: uniform in [-1, 1] per Clifford coordinate."""
    if intrinsic:
        return SliceMonogenicPoly(side, n, scalar_array(scale * rng.uniform(-1, 1, degree + 1), n))
    return SliceMonogenicPoly(side, n, scale * rng.uniform(-1, 1, (degree + 1, 1 << n)))


def random_poly_slice(rng: np.random.Generator, side: Side, n: int, order: int, degree: int,
                      intrinsic: bool = False, scale: float = 1.0) -> PolySliceFunction:
    comps = tuple(random_poly(rng, side, n, degree, intrinsic, scale) for _ in range(order))
    return PolySliceFunction(side, comps)


def _normalized(n: int, comps: np.ndarray, target: float) -> ParavectorOperator:
    T = ParavectorOperator(n, comps)
    norm = T.lift_norm
    return ParavectorOperator(n, comps * (target / norm)) if norm > 0 else T


def random_operator(rng: np.random.Generator, n: int, m: int, norm: float = 1.0) -> ParavectorOperator:
    """Generic (non-commuting for m > 1) operator with ||lift(T)||_2 = norm."""
    return _normalized(n, rng.standard_normal((n + 1, m, m)), norm)


def random_commuting_operator(rng: np.random.Generator, n: int, m: int,
                              norm: float = 1.0) -> ParavectorOperator:
    """Components are quadratic polynomials in one random matrix, so they commute exactly in theory."""
    a = rng.standard_normal((m, m)) / np.sqrt(m)
    powers = np.stack([np.eye(m), a, a @ a])
    coef = rng.standard_normal((n + 1, 3))
    comps = np.einsum("ik,kab->iab", coef, powers)
    return _normalized(n, comps, norm)


def random_interior_point(rng: np.random.Generator, contour: ContourSpec, fraction: float = 0.6) -> Paravector:
    """A paravector whose sphere lies well inside the contour (distance <= fraction * radius)."""
    n = contour.n
    rho = fraction * contour.radius * np.sqrt(rng.uniform())
    phi = rng.uniform(0, np.pi)
    u = contour.center + rho * np.cos(phi)
    v = rho * np.sin(phi)
    g = rng.standard_normal(n)
    return Paravector(n, np.concatenate([[u], v * g / np.linalg.norm(g)]))


def random_right_linear(rng: np.random.Generator, n: int, m: int, norm: float = 1.0) -> CliffordOperator:
    """A random operator sum_A e_A B_A over all blades; it commutes with every R(a)."""
    left = clifford_mult_bases(n)[0]
    mats = rng.standard_normal((1 << n, m, m))
    rep = sum(np.kron(left[a], mats[a]) for a in range(1 << n))
    return CliffordOperator(n, m, rep * (norm / np.linalg.norm(rep, 2)))
