"""Periodic trapezoid quadrature on circles inside a slice C_j.

Every Cauchy-type integral in the package is an integral over a circle
``s(theta) = u_c + r (cos theta + j sin theta)`` with the slice line element
``ds_j = ds (-j) = r e^{j theta} dtheta``.  For periodic analytic integrands the
trapezoid rule converges geometrically, and doubling the node count reuses
every previous evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .clifford import SliceUnit, paravector_array
from .errors import NoConvergence

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PeriodicQuadrature:
    n0: int = 32
    tol: float = 1e-10
    n_max: int = 4096

    def __post_init__(self):
        if self.n0 < 16 or self.n0 & (self.n0 - 1):
            raise ValueError(f"n0 must be a power of two >= 16, got {self.n0}")
        if self.n_max < self.n0:
            raise ValueError("n_max must be at least n0")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class ContourSpec:
    """An axially centered circle traversed counterclockwise in C_j."""

    j: SliceUnit
    center: float
    radius: float
    quad: PeriodicQuadrature = PeriodicQuadrature()

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"radius must be positive, got {self.radius}")

    @property
    def n(self) -> int:
        return self.j.n

    def encloses(self, u: float, v: float, margin: float = 0.0) -> bool:
        """Whether the sphere with slice coordinates (u, v) sits inside the circle."""
        return bool(np.hypot(u - self.center, v) < self.radius - margin)

    def with_unit(self, j: SliceUnit) -> ContourSpec:
        return ContourSpec(j, self.center, self.radius, self.quad)


@dataclass(frozen=True)
class QuadResult:
    value: np.ndarray
    error: float
    nodes: int


def _angles(n_nodes: int, start: int = 0, step: int = 1) -> np.ndarray:
    return TWO_PI * np.arange(start, n_nodes, step) / n_nodes


def nodes_at(contour: ContourSpec, theta: np.ndarray, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """Points and ds_j weights for the given angles of an ``n_nodes``-point rule."""
    n = contour.n
    c, s = np.cos(theta), np.sin(theta)
    jvec = contour.j.components
    pts = np.empty(theta.shape + (n + 1,))
    pts[..., 0] = contour.center + contour.radius * c
    pts[..., 1:] = (contour.radius * s)[..., None] * jvec
    w = np.empty_like(pts)
    scale = contour.radius * TWO_PI / n_nodes
    w[..., 0] = scale * c
    w[..., 1:] = (scale * s)[..., None] * jvec
    return paravector_array(pts)[0], paravector_array(w)[0]


def circle_nodes(contour: ContourSpec, n_nodes: int) -> tuple[np.ndarray, np.ndarray]:
    """All nodes s_k and weights ds_j for theta_k = 2 pi k / N, as (N, 2**n) arrays."""
    if n_nodes < 4:
        raise ValueError("need at least 4 nodes")
    return nodes_at(contour, _angles(n_nodes), n_nodes)


def pairwise_sum(terms: np.ndarray) -> np.ndarray:
    """Sum along axis 0 by recursive halving; the result depends only on the input order."""
    k = terms.shape[0]
    if k <= 8:
        out = terms[0].copy()
        for t in terms[1:]:
            out += t
        return out
    h = k // 2
    return pairwise_sum(terms[:h]) + pairwise_sum(terms[h:])


Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


def integrate_adaptive(integrand: Integrand, contour: ContourSpec,
                       quad: PeriodicQuadrature | None = None) -> QuadResult:
    """(1/2 pi) times the sum of ``integrand(points, weights)`` over nodes, refined by doubling.

    The integrand receives ``(K, 2**n)`` arrays of nodes and ds_j weights and
    returns a ``(K, ...)`` array of weighted contributions, linear in the weight.
    Halving the weight on doubling lets the old sum be reused.
    """
    quad = quad or contour.quad
    n_nodes = quad.n0
    pts, w = circle_nodes(contour, n_nodes)
    total = pairwise_sum(np.asarray(integrand(pts, w)))
    value = total / TWO_PI
    err = np.inf
    while n_nodes < quad.n_max:
        n_nodes *= 2
        pts, w = nodes_at(contour, _angles(n_nodes, 1, 2), n_nodes)
        total = 0.5 * total + pairwise_sum(np.asarray(integrand(pts, w)))
        new = total / TWO_PI
        err = float(np.linalg.norm(np.ravel(new - value)))
        value = new
        if err < quad.tol * (1.0 + float(np.linalg.norm(np.ravel(value)))):
            return QuadResult(value, err, n_nodes)
    raise NoConvergence(value, err, n_nodes)
