"""Real Clifford algebra R_n with e_i^2 = -1, paravectors and slice coordinates.

Multivectors are stored as length-2^n coefficient vectors indexed by bitmask:
bit ``i - 1`` set in ``A`` means the generator ``e_i`` occurs in the blade
``e_A`` (factors in increasing index order).  The array helpers in this module
accept arbitrary leading batch dimensions, so a stack of ``N`` multivectors is
an ``(N, 2**n)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionError, SingularError

MIN_N = 2
MAX_N = 5


def check_n(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or not MIN_N <= n <= MAX_N:
        raise DimensionError(f"generator count must be in [{MIN_N}, {MAX_N}], got {n!r}")
    return int(n)


def blade_sign(a: int, b: int) -> int:
    """Sign of ``e_a e_b`` relative to ``e_{a ^ b}``.

    Counts the transpositions needed to sort the concatenated factor list and
    adds one minus sign for every generator squared away.
    """
    swaps = 0
    x = a >> 1
    while x:
        swaps += bin(x & b).count("1")
        x >>= 1
    swaps += bin(a & b).count("1")
    return -1 if swaps & 1 else 1


@lru_cache(maxsize=None)
def sign_table(n: int) -> np.ndarray:
    """``sign_table(n)[a, b] == blade_sign(a, b)`` for all blades of R_n."""
    d = 1 << n
    table = np.empty((d, d), dtype=np.int8)
    for a in range(d):
        for b in range(d):
            table[a, b] = blade_sign(a, b)
    table.flags.writeable = False
    return table


@lru_cache(maxsize=None)
def _product_plan(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gather indices and signs for ``(ab)[k] = sum_i sgn[k, i] a[i] b[i ^ k]``."""
    d = 1 << n
    k = np.arange(d)[:, None]
    i = np.arange(d)[None, :]
    partner = i ^ k
    sgn = sign_table(n)[i, partner].astype(float)
    partner.flags.writeable = False
    sgn.flags.writeable = False
    return partner, sgn


def dim_of(arr: np.ndarray) -> int:
    d = arr.shape[-1]
    n = d.bit_length() - 1
    if d != 1 << n:
        raise DimensionError(f"last axis of length {d} is not a power of two")
    return check_n(n)


def gp(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Geometric product of two (broadcastable) multivector arrays."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise DimensionError(f"coefficient lengths differ: {a.shape[-1]} vs {b.shape[-1]}")
    partner, sgn = _product_plan(dim_of(a))
    return np.einsum("...i,ki,...ki->...k", a, sgn, b[..., partner])


def gp_chain(*factors: np.ndarray) -> np.ndarray:
    out = factors[0]
    for f in factors[1:]:
        out = gp(out, f)
    return out


@lru_cache(maxsize=None)
def vector_slots(n: int) -> np.ndarray:
    """Coefficient indices of e_1..e_n."""
    out = np.array([1 << i for i in range(n)])
    out.flags.writeable = False
    return out


def scalar_array(values, n: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    out = np.zeros(values.shape + (1 << n,))
    out[..., 0] = values
    return out


def paravector_array(parts) -> tuple[np.ndarray, int]:
    """Embed ``(..., n + 1)`` paravector parts into ``(..., 2**n)`` multivectors."""
    parts = np.asarray(parts, dtype=float)
    n = check_n(parts.shape[-1] - 1)
    out = np.zeros(parts.shape[:-1] + (1 << n,))
    out[..., 0] = parts[..., 0]
    out[..., vector_slots(n)] = parts[..., 1:]
    return out, n


def paravector_parts(mv: np.ndarray) -> np.ndarray:
    n = dim_of(mv)
    return np.concatenate([mv[..., :1], mv[..., vector_slots(n)]], axis=-1)


def is_paravector_array(mv: np.ndarray, atol: float = 0.0) -> np.ndarray:
    n = dim_of(mv)
    mask = np.ones(mv.shape[-1], dtype=bool)
    mask[0] = False
    mask[vector_slots(n)] = False
    return np.all(np.abs(mv[..., mask]) <= atol, axis=-1)


def pv_conj_array(mv: np.ndarray) -> np.ndarray:
    """Paravector conjugate x0 - x_vec on the multivector embedding."""
    out = -np.asarray(mv, dtype=float)
    out[..., 0] *= -1.0
    return out


def pv_norm2_array(mv: np.ndarray) -> np.ndarray:
    n = dim_of(mv)
    return mv[..., 0] ** 2 + np.sum(mv[..., vector_slots(n)] ** 2, axis=-1)


def pv_inv_array(mv: np.ndarray) -> np.ndarray:
    """Inverse of paravectors, x^-1 = conj(x) / |x|^2 (no zero check)."""
    return pv_conj_array(mv) / pv_norm2_array(mv)[..., None]


def pv_pow_array(mv: np.ndarray, k: int) -> np.ndarray:
    """Integer powers of multivector arrays by repeated squaring; k >= 0."""
    result = scalar_array(np.ones(mv.shape[:-1]), dim_of(mv))
    base = mv
    while k:
        if k & 1:
            result = gp(result, base)
        k >>= 1
        if k:
            base = gp(base, base)
    return result


@dataclass(frozen=True, eq=False)
class Multivector:
    """An element of R_n with coefficients in bitmask order."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        check_n(self.n)
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape[0] != 1 << self.n:
            raise DimensionError(f"expected {1 << self.n} coefficients, got {c.shape[0]}")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_array(cls, arr) -> Multivector:
        arr = np.asarray(arr, dtype=float)
        return cls(dim_of(arr), arr)

    @classmethod
    def scalar(cls, value: float, n: int) -> Multivector:
        return cls(n, scalar_array(value, n))

    @classmethod
    def blade(cls, mask: int, n: int, value: float = 1.0) -> Multivector:
        c = np.zeros(1 << n)
        c[mask] = value
        return cls(n, c)

    @classmethod
    def generator(cls, i: int, n: int) -> Multivector:
        """The generator e_i, 1 <= i <= n."""
        if not 1 <= i <= n:
            raise DimensionError(f"no generator e_{i} in R_{n}")
        return cls.blade(1 << (i - 1), n)

    def _coerce(self, other) -> np.ndarray:
        if isinstance(other, Multivector):
            if other.n != self.n:
                raise DimensionError(f"R_{self.n} and R_{other.n} do not mix")
            return other.coeffs
        if isinstance(other, Paravector):
            return self._coerce(other.to_multivector())
        return scalar_array(float(other), self.n)

    def __add__(self, other) -> Multivector:
        return Multivector(self.n, self.coeffs + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other) -> Multivector:
        return Multivector(self.n, self.coeffs - self._coerce(other))

    def __rsub__(self, other) -> Multivector:
        return Multivector(self.n, self._coerce(other) - self.coeffs)

    def __neg__(self) -> Multivector:
        return Multivector(self.n, -self.coeffs)

    def __mul__(self, other) -> Multivector:
        if isinstance(other, (Multivector, Paravector)):
            return mv_mul(self, other)
        return Multivector(self.n, self.coeffs * float(other))

    def __rmul__(self, other) -> Multivector:
        return Multivector(self.n, self.coeffs * float(other))

    def __truediv__(self, other: float) -> Multivector:
        return Multivector(self.n, self.coeffs / float(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.coeffs.tobytes()))

    def __repr__(self) -> str:
        return f"Multivector(n={self.n}, coeffs={self.coeffs.tolist()})"

    @property
    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return float(np.linalg.norm(self.coeffs))

    def is_scalar(self, atol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.coeffs[1:]) <= atol))

    def is_paravector(self, atol: float = 0.0) -> bool:
        return bool(is_paravector_array(self.coeffs, atol))

    def to_paravector(self, atol: float = 1e-12) -> Paravector:
        if not self.is_paravector(atol * max(1.0, self.norm())):
            raise ValueError("multivector has components above grade one")
        return Paravector(self.n, paravector_parts(self.coeffs))

    def allclose(self, other, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.coeffs, self._coerce(other), rtol=0.0, atol=atol))

    def to_list(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def mv_mul(a: Multivector | Paravector, b: Multivector | Paravector) -> Multivector:
    """Clifford product ``a b``."""
    if isinstance(a, Paravector):
        a = a.to_multivector()
    if isinstance(b, Paravector):
        b = b.to_multivector()
    if a.n != b.n:
        raise DimensionError(f"cannot multiply elements of R_{a.n} and R_{b.n}")
    return Multivector(a.n, gp(a.coeffs, b.coeffs))


@dataclass(frozen=True, eq=False)
class Paravector:
    """x = x_0 + x_1 e_1 + ... + x_n e_n."""

    n: int
    parts: np.ndarray

    def __post_init__(self):
        check_n(self.n)
        p = np.array(self.parts, dtype=float).reshape(-1)
        if p.shape[0] != self.n + 1:
            raise DimensionError(f"expected {self.n + 1} parts, got {p.shape[0]}")
        p.flags.writeable = False
        object.__setattr__(self, "parts", p)

    @classmethod
    def from_parts(cls, parts) -> Paravector:
        parts = np.asarray(parts, dtype=float)
        return cls(parts.shape[-1] - 1, parts)

    @classmethod
    def real(cls, value: float, n: int) -> Paravector:
        p = np.zeros(n + 1)
        p[0] = value
        return cls(n, p)

    @property
    def re(self) -> float:
        return float(self.parts[0])

    @property
    def vector(self) -> np.ndarray:
        return self.parts[1:]

    def norm(self) -> float:
        return float(np.linalg.norm(self.parts))

    def to_multivector(self) -> Multivector:
        return Multivector(self.n, paravector_array(self.parts)[0])

    @property
    def coeffs(self) -> np.ndarray:
        return self.to_multivector().coeffs

    def __add__(self, other) -> Paravector:
        if isinstance(other, Paravector):
            if other.n != self.n:
                raise DimensionError(f"R_{self.n} and R_{other.n} do not mix")
            return Paravector(self.n, self.parts + other.parts)
        p = self.parts.copy()
        p[0] += float(other)
        return Paravector(self.n, p)

    __radd__ = __add__

    def __neg__(self) -> Paravector:
        return Paravector(self.n, -self.parts)

    def __sub__(self, other) -> Paravector:
        return self + (-other)

    def __rsub__(self, other) -> Paravector:
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Multivector, Paravector)):
            return mv_mul(self, other)
        return Paravector(self.n, self.parts * float(other))

    def __rmul__(self, other) -> Paravector:
        return Paravector(self.n, self.parts * float(other))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Paravector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.parts, other.parts)

    def __hash__(self):
        return hash((self.n, self.parts.tobytes()))

    def __repr__(self) -> str:
        return f"Paravector(n={self.n}, parts={self.parts.tolist()})"

    def to_list(self) -> list[float]:
        return [float(c) for c in self.parts]


def pv_conj(x: Paravector) -> Paravector:
    p = -x.parts
    p[0] = x.parts[0]
    return Paravector(x.n, p)


def pv_inverse(x: Paravector) -> Paravector:
    r2 = float(np.dot(x.parts, x.parts))
    if r2 == 0.0 or not np.isfinite(r2):
        raise SingularError("zero paravector has no inverse")
    return Paravector(x.n, pv_conj(x).parts / r2)


@dataclass(frozen=True, eq=False)
class SliceUnit:
    """A unit 1-vector j = j_1 e_1 + ... + j_n e_n, so that j^2 = -1."""

    n: int
    components: np.ndarray

    def __post_init__(self):
        check_n(self.n)
        c = np.array(self.components, dtype=float).reshape(-1)
        if c.shape[0] != self.n:
            raise DimensionError(f"expected {self.n} components, got {c.shape[0]}")
        if abs(float(np.dot(c, c)) - 1.0) > 1e-12:
            raise ValueError(f"slice unit must have norm 1, got {np.linalg.norm(c)!r}")
        c.flags.writeable = False
        object.__setattr__(self, "components", c)

    @classmethod
    def from_vector(cls, vec) -> SliceUnit:
        """Normalize a nonzero vector into a slice unit."""
        vec = np.asarray(vec, dtype=float)
        r = float(np.linalg.norm(vec))
        if r == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return cls(vec.shape[0], vec / r)

    @classmethod
    def basis(cls, i: int, n: int) -> SliceUnit:
        c = np.zeros(n)
        c[i - 1] = 1.0
        return cls(n, c)

    def to_multivector(self) -> Multivector:
        p = np.concatenate([[0.0], self.components])
        return Paravector(self.n, p).to_multivector()

    @property
    def coeffs(self) -> np.ndarray:
        return self.to_multivector().coeffs

    def __neg__(self) -> SliceUnit:
        return SliceUnit(self.n, -self.components)

    def point(self, u: float, v: float) -> Paravector:
        """The paravector u + j v in the slice C_j."""
        return Paravector(self.n, np.concatenate([[u], v * self.components]))

    def embed_complex(self, z: complex) -> Multivector:
        return self.point(z.real, z.imag).to_multivector()

    def __repr__(self) -> str:
        return f"SliceUnit(n={self.n}, components={self.components.tolist()})"


@dataclass(frozen=True)
class SliceCoordinates:
    """x = u + j v with v >= 0."""

    u: float
    v: float
    j: SliceUnit

    def recompose(self) -> Paravector:
        return self.j.point(self.u, self.v)


def pv_decompose(x: Paravector, default_j: SliceUnit | None = None) -> SliceCoordinates:
    """Split x into (u, v, j).  Real points return v = 0 and ``default_j``."""
    v = float(np.linalg.norm(x.vector))
    if v == 0.0:
        j = default_j if default_j is not None else SliceUnit.basis(1, x.n)
        if j.n != x.n:
            raise DimensionError("default slice unit has the wrong dimension")
        return SliceCoordinates(x.re, 0.0, j)
    return SliceCoordinates(x.re, v, SliceUnit(x.n, x.vector / v))


def same_sphere(s: Paravector, x: Paravector, rel_tol: float = 1e-9) -> bool:
    """True when s lies (numerically) on the sphere [x]."""
    tol = rel_tol * (1.0 + s.norm())
    vs = float(np.linalg.norm(s.vector))
    vx = float(np.linalg.norm(x.vector))
    return abs(s.re - x.re) < tol and abs(vs - vx) < tol


def random_unit(rng: np.random.Generator, n: int) -> SliceUnit:
    """A uniformly distributed imaginary unit on the sphere S of R_n."""
    check_n(n)
    while True:
        g = rng.standard_normal(n)
        r = float(np.linalg.norm(g))
        if r > 1e-8:
            return SliceUnit(n, g / r)
