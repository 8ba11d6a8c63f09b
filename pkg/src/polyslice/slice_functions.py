"""Slice monogenic polynomials, Cauchy kernels, representation and splitting.

A left slice monogenic polynomial is ``f(x) = sum_u x^u A_u`` and a right one is
``f(x) = sum_u A_u x^u`` with Clifford coefficients ``A_u``.  Evaluation works on
batches of paravectors stored as ``(..., 2**n)`` multivector arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .clifford import (
    Multivector,
    Paravector,
    SliceUnit,
    check_n,
    gp,
    is_paravector_array,
    pv_conj_array,
    pv_inv_array,
    pv_norm2_array,
    same_sphere,
    scalar_array,
    vector_slots,
)
from .errors import (
    ContourError,
    DimensionError,
    InvalidBasisError,
    OnSphereError,
    SideMismatchError,
)
from .quadrature import ContourSpec, PeriodicQuadrature, integrate_adaptive

Side = Literal["L", "R"]
KernelForm = Literal["I", "II"]

# Points closer than this fraction of the radius to the contour are rejected.
CONTOUR_MARGIN = 1e-6


def check_side(side: str) -> str:
    if side not in ("L", "R"):
        raise ValueError(f"side must be 'L' or 'R', got {side!r}")
    return side


def _as_array(x) -> np.ndarray:
    if isinstance(x, (Multivector, Paravector, SliceUnit)):
        return x.coeffs
    return np.asarray(x, dtype=float)


@dataclass(frozen=True, eq=False)
class SliceMonogenicPoly:
    """Finite power series with Clifford coefficients on one side of the variable.

    ``coeffs`` has shape ``(D + 1, 2**n)``; row ``u`` is the coefficient of ``x^u``.
    """

    side: Side
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        check_side(self.side)
        check_n(self.n)
        c = np.array(self.coeffs, dtype=float)
        if c.ndim == 1:
            c = c[None, :]
        if c.ndim != 2 or c.shape[1] != 1 << self.n or c.shape[0] == 0:
            raise DimensionError(f"coefficients must have shape (D+1, {1 << self.n}), got {c.shape}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_multivectors(cls, side: Side, coeffs: Sequence[Multivector]) -> SliceMonogenicPoly:
        n = coeffs[0].n
        if any(c.n != n for c in coeffs):
            raise DimensionError("coefficients from different algebras")
        return cls(side, n, np.stack([c.coeffs for c in coeffs]))

    @classmethod
    def real(cls, side: Side, n: int, values: Sequence[float]) -> SliceMonogenicPoly:
        """Intrinsic polynomial with real coefficients ``values[u]``."""
        return cls(side, n, scalar_array(np.asarray(values, dtype=float), n))

    @classmethod
    def constant(cls, side: Side, a: Multivector) -> SliceMonogenicPoly:
        return cls(side, a.n, a.coeffs[None, :])

    @classmethod
    def zero(cls, side: Side, n: int) -> SliceMonogenicPoly:
        return cls(side, n, np.zeros((1, 1 << n)))

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def is_intrinsic(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs[:, 1:]) <= atol))

    @property
    def is_polynomial(self) -> bool:
        return True

    def coefficient(self, u: int) -> Multivector:
        return Multivector(self.n, self.coeffs[u])

    def scaled(self, c: float) -> SliceMonogenicPoly:
        return SliceMonogenicPoly(self.side, self.n, self.coeffs * c)

    def as_side(self, side: Side) -> SliceMonogenicPoly:
        """Reinterpret an intrinsic polynomial as a function of the other side."""
        check_side(side)
        if side != self.side and not self.is_intrinsic():
            raise SideMismatchError("only intrinsic functions are both left and right")
        return SliceMonogenicPoly(side, self.n, self.coeffs)

    def eval_array(self, x: np.ndarray) -> np.ndarray:
        """Evaluate at a batch of multivectors (Horner scheme on the proper side)."""
        x = np.asarray(x, dtype=float)
        out = np.broadcast_to(self.coeffs[-1], x.shape).copy()
        for a in self.coeffs[-2::-1]:
            out = (gp(x, out) if self.side == "L" else gp(out, x)) + a
        return out

    def __call__(self, x: Paravector | Multivector) -> Multivector:
        return eval_slice_poly(self, x)


@dataclass(frozen=True, eq=False)
class IntrinsicElementary:
    """``scale * phi(x)`` for an entire intrinsic function phi (exp, sin, cos).

    Evaluated slice by slice from the complex function; usable inside the
    quadrature-based calculi but carries no coefficient series.
    """

    name: str
    side: Side
    n: int
    scale: float = 1.0

    _FUNCS = {"exp": np.exp, "sin": np.sin, "cos": np.cos}

    def __post_init__(self):
        check_side(self.side)
        check_n(self.n)
        if self.name not in self._FUNCS:
            raise ValueError(f"unknown elementary function {self.name!r}")

    @property
    def is_polynomial(self) -> bool:
        return False

    def is_intrinsic(self, atol: float = 0.0) -> bool:
        return True

    def scaled(self, c: float) -> IntrinsicElementary:
        return IntrinsicElementary(self.name, self.side, self.n, self.scale * c)

    def as_side(self, side: Side) -> IntrinsicElementary:
        return IntrinsicElementary(self.name, check_side(side), self.n, self.scale)

    def eval_array(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not np.all(is_paravector_array(x, 1e-12 * (1.0 + np.abs(x).max()))):
            raise ValueError("elementary functions are evaluated at paravectors only")
        slots = vector_slots(self.n)
        vec = x[..., slots]
        v = np.linalg.norm(vec, axis=-1)
        w = self.scale * self._FUNCS[self.name](x[..., 0] + 1j * v)
        out = np.zeros(x.shape)
        out[..., 0] = w.real
        safe = np.where(v > 0, v, 1.0)
        out[..., slots] = (w.imag / safe)[..., None] * vec
        return out

    def __call__(self, x: Paravector | Multivector) -> Multivector:
        return Multivector(self.n, self.eval_array(_as_array(x)))


SliceFunction = SliceMonogenicPoly | IntrinsicElementary


def eval_slice_poly(f: SliceFunction, x: Paravector | Multivector) -> Multivector:
    arr = _as_array(x)
    if arr.shape[-1] != 1 << f.n:
        raise DimensionError(f"point is not in R_{f.n}")
    return Multivector(f.n, f.eval_array(arr))


def star_product(f: SliceMonogenicPoly, g: SliceMonogenicPoly) -> SliceMonogenicPoly:
    """Coefficient convolution ``C_u = sum_{p+q=u} A_p B_q`` (the same order on both sides)."""
    if f.side != g.side:
        raise SideMismatchError("star product needs two functions of the same side")
    if f.n != g.n:
        raise DimensionError("star product operands live in different algebras")
    out = np.zeros((f.degree + g.degree + 1, 1 << f.n))
    for p, a in enumerate(f.coeffs):
        out[p:p + g.degree + 1] += gp(a, g.coeffs)
    return SliceMonogenicPoly(f.side, f.n, out)


# ----------------------------------------------------------------------------
# Cauchy kernels
# ----------------------------------------------------------------------------

def _quad_in_x(s: np.ndarray, x: np.ndarray) -> np.ndarray:
    """x^2 - 2 Re(s) x + |s|^2, a paravector whenever s and x are."""
    return gp(x, x) - 2.0 * s[..., :1] * x + scalar_array(pv_norm2_array(s), s.shape[-1].bit_length() - 1)


def _quad_in_s(s: np.ndarray, x: np.ndarray) -> np.ndarray:
    """s^2 - 2 Re(x) s + |x|^2."""
    return gp(s, s) - 2.0 * x[..., :1] * s + scalar_array(pv_norm2_array(x), s.shape[-1].bit_length() - 1)


def sl_array(s: np.ndarray, x: np.ndarray, form: KernelForm = "I") -> np.ndarray:
    """Left kernel S_L^{-1}(s, x) on paravector arrays (no on-sphere check)."""
    if form == "I":
        return -gp(pv_inv_array(_quad_in_x(s, x)), x - pv_conj_array(s))
    if form == "II":
        return gp(s - pv_conj_array(x), pv_inv_array(_quad_in_s(s, x)))
    raise ValueError(f"unknown kernel form {form!r}")


def sr_array(s: np.ndarray, x: np.ndarray, form: KernelForm = "I") -> np.ndarray:
    """Right kernel S_R^{-1}(s, x) on paravector arrays (no on-sphere check)."""
    if form == "I":
        return -gp(x - pv_conj_array(s), pv_inv_array(_quad_in_x(s, x)))
    if form == "II":
        return gp(pv_inv_array(_quad_in_s(s, x)), s - pv_conj_array(x))
    raise ValueError(f"unknown kernel form {form!r}")


def kernel_array(s: np.ndarray, x: np.ndarray, side: Side, form: KernelForm = "I") -> np.ndarray:
    return sl_array(s, x, form) if side == "L" else sr_array(s, x, form)


def _check_pair(s: Paravector, x: Paravector) -> None:
    if s.n != x.n:
        raise DimensionError("kernel arguments live in different algebras")
    if same_sphere(s, x):
        raise OnSphereError("s lies on the sphere [x]; the Cauchy kernel is singular there")


def kernel_SL(s: Paravector, x: Paravector, form: KernelForm = "I") -> Multivector:
    _check_pair(s, x)
    return Multivector(s.n, sl_array(s.coeffs, x.coeffs, form))


def kernel_SR(s: Paravector, x: Paravector, form: KernelForm = "I") -> Multivector:
    _check_pair(s, x)
    return Multivector(s.n, sr_array(s.coeffs, x.coeffs, form))


def kernel_S(s: Paravector, x: Paravector, side: Side, form: KernelForm = "I") -> Multivector:
    return kernel_SL(s, x, form) if check_side(side) == "L" else kernel_SR(s, x, form)


# ----------------------------------------------------------------------------
# Representation formula and splitting
# ----------------------------------------------------------------------------

def representation_extend(value_plus: Multivector, value_minus: Multivector,
                          j: SliceUnit, j_x: SliceUnit, side: Side = "L") -> Multivector:
    """Value at u + j_x v from the values at u + j v and u - j v.

    Left: ``(1 - j_x j) f+ / 2 + (1 + j_x j) f- / 2``; right mirrors every product.
    """
    check_side(side)
    jj = gp(j_x.coeffs, j.coeffs) if side == "L" else gp(j.coeffs, j_x.coeffs)
    one = scalar_array(1.0, j.n)
    a, b = 0.5 * (one - jj), 0.5 * (one + jj)
    if side == "L":
        out = gp(a, value_plus.coeffs) + gp(b, value_minus.coeffs)
    else:
        out = gp(value_plus.coeffs, a) + gp(value_minus.coeffs, b)
    return Multivector(j.n, out)


def default_completion(j1: SliceUnit) -> list[SliceUnit]:
    """n - 1 orthonormal units orthogonal to j1, from orthonormalizing the standard basis."""
    n = j1.n
    basis = [np.asarray(j1.components)]
    for i in range(n):
        w = np.eye(n)[i]
        for b in basis:
            w = w - np.dot(w, b) * b
        r = np.linalg.norm(w)
        if r > 1e-8:
            basis.append(w / r)
        if len(basis) == n:
            break
    # A second pass removes the residual non-orthogonality of classical Gram-Schmidt.
    out = []
    for w in basis[1:]:
        for b in [basis[0], *out]:
            w = w - np.dot(w, b) * b
        out.append(w / np.linalg.norm(w))
    return [SliceUnit(n, w) for w in out]


def validate_basis(units: Sequence[SliceUnit], tol: float = 1e-12) -> None:
    """Require j_r j_s + j_s j_r = -2 delta_rs for all pairs."""
    n = units[0].n
    for r, a in enumerate(units):
        if a.n != n:
            raise InvalidBasisError("basis units live in different algebras")
        for s, b in enumerate(units):
            anti = gp(a.coeffs, b.coeffs) + gp(b.coeffs, a.coeffs)
            target = scalar_array(-2.0 if r == s else 0.0, n)
            if np.max(np.abs(anti - target)) > tol:
                raise InvalidBasisError(f"units {r} and {s} violate j_r j_s + j_s j_r = -2 delta_rs")


def _blade_products(completion: Sequence[SliceUnit]) -> np.ndarray:
    """j_A for every subset A of the completion, in bitmask order."""
    n = completion[0].n
    k = len(completion)
    out = np.zeros((1 << k, 1 << n))
    for mask in range(1 << k):
        acc = scalar_array(1.0, n)
        for i in range(k):
            if mask >> i & 1:
                acc = gp(acc, completion[i].coeffs)
        out[mask] = acc
    return out


def _split_matrix(j1: SliceUnit, completion: Sequence[SliceUnit], side: Side) -> np.ndarray:
    blades = _blade_products(completion)
    j = j1.coeffs
    cols = []
    for ja in blades:
        cols.append(ja)
        cols.append(gp(j, ja) if side == "L" else gp(ja, j))
    return np.stack(cols, axis=1)


def split_value(value: Multivector, j1: SliceUnit,
                completion: Sequence[SliceUnit] | None = None, side: Side = "L") -> np.ndarray:
    """Coordinates of a Clifford number in the splitting basis.

    Returns complex numbers ``c_A = a_A + i b_A`` with ``value = sum (a_A + b_A j1) j_A``
    (left) or ``sum j_A (a_A + b_A j1)`` (right).
    """
    check_side(side)
    completion = list(completion) if completion is not None else default_completion(j1)
    if len(completion) != j1.n - 1:
        raise InvalidBasisError(f"need {j1.n - 1} completion units, got {len(completion)}")
    validate_basis([j1, *completion])
    mat = _split_matrix(j1, completion, side)
    sol = np.linalg.solve(mat, value.coeffs)
    return sol[0::2] + 1j * sol[1::2]


def reassemble_split(parts: np.ndarray, j1: SliceUnit,
                     completion: Sequence[SliceUnit] | None = None, side: Side = "L") -> Multivector:
    completion = list(completion) if completion is not None else default_completion(j1)
    mat = _split_matrix(j1, completion, side)
    real = np.empty(2 * len(parts))
    real[0::2], real[1::2] = parts.real, parts.imag
    return Multivector(j1.n, mat @ real)


def split_components(f: SliceFunction, j1: SliceUnit,
                     basis_completion: Sequence[SliceUnit] | None, z: complex) -> np.ndarray:
    """The 2^(n-1) holomorphic components F_A(z) of f restricted to C_{j1}."""
    value = eval_slice_poly(f, j1.point(z.real, z.imag))
    return split_value(value, j1, basis_completion, f.side)


# ----------------------------------------------------------------------------
# Slice Cauchy integral
# ----------------------------------------------------------------------------

def check_inside(contour: ContourSpec, x: Paravector) -> None:
    v = float(np.linalg.norm(x.vector))
    if not contour.encloses(x.re, v, CONTOUR_MARGIN * contour.radius):
        raise ContourError(f"point with (u, v) = ({x.re:.6g}, {v:.6g}) is not strictly inside the contour")


def slice_cauchy_integral(f: SliceFunction, contour: ContourSpec, x: Paravector,
                          quad: PeriodicQuadrature | None = None) -> Multivector:
    """(1/2 pi) times the contour integral of S^{-1}(s, x) ds_j f(s), side-ordered."""
    if f.n != x.n or contour.n != x.n:
        raise DimensionError("function, contour and point must share n")
    check_inside(contour, x)
    xa = x.coeffs

    def integrand(s, w):
        if f.side == "L":
            return gp(gp(sl_array(s, xa), w), f.eval_array(s))
        return gp(gp(f.eval_array(s), w), sr_array(s, xa))

    return Multivector(x.n, integrate_adaptive(integrand, contour, quad).value)
