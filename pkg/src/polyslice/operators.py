"""Paravector operators on V_n = R^m (x) R_n and their S-resolvents.

A vector of V_n is stored blade-major: index ``B * m + i`` holds the ``i``-th
real coordinate of the coefficient on ``e_B``.  A paravector operator
``T = T_0 + sum_i e_i T_i`` with real ``m x m`` components acts by

    T(sum_B v_B e_B) = sum_{A, B} T_A(v_B) e_A e_B,

so ``lift(T) = sum_A kron(Lclif(e_A), T_A)``.  Clifford scalars written to the
right of an operator act through ``R(a): v -> v a``; scalars written to the left
act through ``L(a): v -> a v``.  ``R(a) R(b) = R(b a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb, factorial

import numpy as np

from .clifford import Multivector, Paravector, check_n, gp, pv_conj_array, pv_pow_array, vector_slots
from .errors import DimensionError, SSpectrumHit
from .slice_functions import Side, check_side

COMMUTING_TOL = 1e-12
INVERTIBILITY_REL = 1e-10


@lru_cache(maxsize=None)
def clifford_mult_bases(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Left and right multiplication matrices of every basis blade, shape (2^n, 2^n, 2^n)."""
    d = 1 << n
    eye = np.eye(d)
    left = np.empty((d, d, d))
    right = np.empty((d, d, d))
    for a in range(d):
        # column b holds the coefficients of e_a e_b (resp. e_b e_a)
        left[a] = gp(eye[a][None, :], eye).T
        right[a] = gp(eye, eye[a][None, :]).T
    left.flags.writeable = False
    right.flags.writeable = False
    return left, right


def lclif(a: np.ndarray) -> np.ndarray:
    """Matrix of x -> a x on R_n; batched over leading axes of ``a``."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1].bit_length() - 1
    return np.einsum("...a,aij->...ij", a, clifford_mult_bases(n)[0])


def rclif(a: np.ndarray) -> np.ndarray:
    """Matrix of x -> x a on R_n; batched over leading axes of ``a``."""
    a = np.asarray(a, dtype=float)
    n = a.shape[-1].bit_length() - 1
    return np.einsum("...a,aij->...ij", a, clifford_mult_bases(n)[1])


def _tensor_identity(mat: np.ndarray, m: int) -> np.ndarray:
    """kron(mat, I_m) for a batch of square matrices."""
    d = mat.shape[-1]
    out = np.einsum("...ij,pq->...ipjq", mat, np.eye(m))
    return out.reshape(mat.shape[:-2] + (d * m, d * m))


def left_mult_array(a: np.ndarray, m: int) -> np.ndarray:
    return _tensor_identity(lclif(a), m)


def right_mult_array(a: np.ndarray, m: int) -> np.ndarray:
    return _tensor_identity(rclif(a), m)


@dataclass(frozen=True, eq=False)
class CliffordOperator:
    """A real-linear operator on V_n given by its real matrix."""

    n: int
    m: int
    realrep: np.ndarray

    def __post_init__(self):
        check_n(self.n)
        r = np.array(self.realrep, dtype=float)
        size = self.m << self.n
        if r.shape != (size, size):
            raise DimensionError(f"realrep must be {size}x{size}, got {r.shape}")
        r.flags.writeable = False
        object.__setattr__(self, "realrep", r)

    @classmethod
    def identity(cls, n: int, m: int) -> CliffordOperator:
        return cls(n, m, np.eye(m << n))

    def _other(self, other: CliffordOperator) -> np.ndarray:
        if not isinstance(other, CliffordOperator):
            raise TypeError("expected a CliffordOperator")
        if (other.n, other.m) != (self.n, self.m):
            raise DimensionError("operators act on different spaces")
        return other.realrep

    def __matmul__(self, other: CliffordOperator) -> CliffordOperator:
        return CliffordOperator(self.n, self.m, self.realrep @ self._other(other))

    def __add__(self, other: CliffordOperator) -> CliffordOperator:
        return CliffordOperator(self.n, self.m, self.realrep + self._other(other))

    def __sub__(self, other: CliffordOperator) -> CliffordOperator:
        return CliffordOperator(self.n, self.m, self.realrep - self._other(other))

    def __neg__(self) -> CliffordOperator:
        return CliffordOperator(self.n, self.m, -self.realrep)

    def __mul__(self, c: float) -> CliffordOperator:
        return CliffordOperator(self.n, self.m, self.realrep * float(c))

    __rmul__ = __mul__

    def power(self, k: int) -> CliffordOperator:
        return CliffordOperator(self.n, self.m, np.linalg.matrix_power(self.realrep, k))

    def norm(self) -> float:
        """Spectral norm of the real matrix."""
        return float(np.linalg.norm(self.realrep, 2))

    def dist(self, other: CliffordOperator) -> float:
        return (self - other).norm()

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Apply to a vector given as an (2^n, m) array of blade coefficients."""
        v = np.asarray(v, dtype=float)
        return (self.realrep @ v.reshape(-1)).reshape(1 << self.n, self.m)


def left_mult_op(a: Multivector | Paravector, m: int) -> CliffordOperator:
    """v -> a v."""
    return CliffordOperator(a.n, m, left_mult_array(a.coeffs, m))


def right_mult_op(a: Multivector | Paravector, m: int) -> CliffordOperator:
    """v -> v a."""
    return CliffordOperator(a.n, m, right_mult_array(a.coeffs, m))


@dataclass(frozen=True, eq=False)
class ParavectorOperator:
    """T = T_0 + e_1 T_1 + ... + e_n T_n with real m x m components."""

    n: int
    components: np.ndarray

    def __post_init__(self):
        check_n(self.n)
        c = np.array(self.components, dtype=float)
        if c.ndim != 3 or c.shape[0] != self.n + 1 or c.shape[1] != c.shape[2]:
            raise DimensionError(f"components must have shape ({self.n + 1}, m, m), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("operator components must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "components", c)

    @classmethod
    def from_paravectors(cls, entries) -> ParavectorOperator:
        """Diagonal operator whose i-th diagonal entry is the paravector ``entries[i]``."""
        n = entries[0].n
        comps = np.zeros((n + 1, len(entries), len(entries)))
        for i, q in enumerate(entries):
            comps[:, i, i] = q.parts
        return cls(n, comps)

    @classmethod
    def zero(cls, n: int, m: int) -> ParavectorOperator:
        return cls(n, np.zeros((n + 1, m, m)))

    @property
    def m(self) -> int:
        return self.components.shape[1]

    def commutator_norm(self) -> float:
        worst = 0.0
        for i in range(self.n + 1):
            for k in range(i + 1, self.n + 1):
                a, b = self.components[i], self.components[k]
                worst = max(worst, float(np.linalg.norm(a @ b - b @ a, 2)))
        return worst

    @cached_property
    def commuting(self) -> bool:
        return self.commutator_norm() < COMMUTING_TOL * max(1.0, self.component_norm ** 2)

    @cached_property
    def component_norm(self) -> float:
        """Sum of the spectral norms of the components."""
        return float(sum(np.linalg.norm(c, 2) for c in self.components))

    def conj(self) -> ParavectorOperator:
        c = -self.components
        c[0] = self.components[0]
        return ParavectorOperator(self.n, c)

    @cached_property
    def lifted(self) -> np.ndarray:
        n, m = self.n, self.m
        left = clifford_mult_bases(n)[0]
        blades = [0, *vector_slots(n)]
        out = np.zeros((m << n, m << n))
        for comp, blade in zip(self.components, blades):
            out += np.kron(left[blade], comp)
        out.flags.writeable = False
        return out

    @cached_property
    def lifted_conj(self) -> np.ndarray:
        return self.conj().lifted

    @cached_property
    def lift_norm(self) -> float:
        return float(np.linalg.norm(self.lifted, 2))

    def lift(self) -> CliffordOperator:
        return CliffordOperator(self.n, self.m, self.lifted)

    def invertibility_floor(self) -> float:
        return INVERTIBILITY_REL * (1.0 + self.component_norm ** 2)


def lift_operator(T: ParavectorOperator) -> CliffordOperator:
    return T.lift()


def _pv_array(s: Paravector | Multivector) -> np.ndarray:
    return s.coeffs


def q_array(T: ParavectorOperator, s: np.ndarray) -> np.ndarray:
    """Q_s(T) = T^2 - 2 Re(s) T + |s|^2 for a batch of paravectors s (..., 2^n)."""
    s = np.asarray(s, dtype=float)
    lt = T.lifted
    re = s[..., 0]
    mod2 = np.sum(s ** 2, axis=-1)
    eye = np.eye(lt.shape[0])
    return (lt @ lt) - 2.0 * re[..., None, None] * lt + mod2[..., None, None] * eye


def q_operator(T: ParavectorOperator, s: Paravector) -> CliffordOperator:
    return CliffordOperator(T.n, T.m, q_array(T, _pv_array(s)))


def smallest_singular(mats: np.ndarray) -> np.ndarray:
    return np.linalg.svd(mats, compute_uv=False)[..., -1]


def pseudo_resolvent_array(T: ParavectorOperator, s: np.ndarray) -> np.ndarray:
    """Q_s(T)^{-1} for a batch of s; raises SSpectrumHit near the S-spectrum."""
    q = q_array(T, s)
    sig = smallest_singular(q)
    floor = T.invertibility_floor()
    if np.any(sig <= floor):
        worst = float(np.min(sig))
        raise SSpectrumHit(f"Q_s(T) is numerically singular (sigma_min = {worst:.3e} <= {floor:.3e})")
    return np.linalg.inv(q)


def pseudo_resolvent(T: ParavectorOperator, s: Paravector) -> CliffordOperator:
    return CliffordOperator(T.n, T.m, pseudo_resolvent_array(T, _pv_array(s)))


def s_resolvent_array(T: ParavectorOperator, s: np.ndarray, side: Side) -> np.ndarray:
    """Left: -Q^{-1}(T - R(conj s)).  Right: -(T - L(conj s)) Q^{-1}."""
    qinv = pseudo_resolvent_array(T, s)
    sc = pv_conj_array(s)
    if side == "L":
        return -qinv @ (T.lifted - right_mult_array(sc, T.m))
    return -(T.lifted - left_mult_array(sc, T.m)) @ qinv


def s_resolvent(T: ParavectorOperator, s: Paravector, side: Side = "L") -> CliffordOperator:
    return CliffordOperator(T.n, T.m, s_resolvent_array(T, _pv_array(s), check_side(side)))


def pi_s_resolvent(T: ParavectorOperator, s: Paravector, ell: int, side: Side = "L") -> CliffordOperator:
    """(1/ell!) sum_k C(ell,k) conj(T)^k S_L^{-1}(s,T) (-conj s)^(ell-k), or its right mirror."""
    check_side(side)
    sa = _pv_array(s)
    res = s_resolvent_array(T, sa, side)
    tb = T.lifted_conj
    ms = -pv_conj_array(sa)
    out = np.zeros_like(res)
    for k in range(ell + 1):
        scal = pv_pow_array(ms, ell - k)
        tk = np.linalg.matrix_power(tb, k)
        if side == "L":
            term = tk @ right_mult_array(scal, T.m) @ res
        else:
            term = left_mult_array(scal, T.m) @ res @ tk
        out += comb(ell, k) * term
    return CliffordOperator(T.n, T.m, out / factorial(ell))


def modified_s_resolvent(T: ParavectorOperator, s: Paravector, B: CliffordOperator,
                         side: Side = "L") -> CliffordOperator:
    """Left: -Q^{-1}(T B - R(conj s) B).  Right: -(B T - L(conj s) B) Q^{-1}.

    The trailing scalar in ``B conj(s)`` acts through R(.) after B.
    """
    check_side(side)
    sa = _pv_array(s)
    qinv = pseudo_resolvent_array(T, sa)
    sc = pv_conj_array(sa)
    b = B.realrep
    if side == "L":
        out = -qinv @ (T.lifted @ b - right_mult_array(sc, T.m) @ b)
    else:
        out = -(b @ T.lifted - left_mult_array(sc, T.m) @ b) @ qinv
    return CliffordOperator(T.n, T.m, out)


def s_resolvent_series(T: ParavectorOperator, s: Paravector, terms: int, side: Side = "L",
                       B: CliffordOperator | None = None) -> CliffordOperator:
    """Partial sums of sum_k T^k B R(s^{-k-1}) (left) or sum_k L(s^{-k-1}) B T^k (right)."""
    check_side(side)
    sa = _pv_array(s)
    sinv = pv_conj_array(sa) / np.sum(sa ** 2)
    lt = T.lifted
    b = np.eye(lt.shape[0]) if B is None else B.realrep
    tk = np.eye(lt.shape[0])
    spow = sinv
    out = np.zeros_like(lt)
    for _ in range(terms):
        if side == "L":
            out += right_mult_array(spow, T.m) @ tk @ b
        else:
            out += left_mult_array(spow, T.m) @ b @ tk
        tk = tk @ lt
        spow = gp(spow, sinv)
    return CliffordOperator(T.n, T.m, out)


# ----------------------------------------------------------------------------
# S-spectrum scan
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SSpectrumEstimate:
    """Points (u, v, sigma_min) standing for the spheres [u + j v] of the S-spectrum."""

    points: tuple
    window: tuple
    step: float
    refine: int
    candidates: int

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 3)

    @property
    def radius(self) -> float:
        pts = self.as_array()
        return float(np.max(np.hypot(pts[:, 0], pts[:, 1]))) if len(pts) else 0.0


def _sigma_grid(T: ParavectorOperator, uu: np.ndarray, vv: np.ndarray, chunk: int = 2048) -> np.ndarray:
    lt = T.lifted
    l2 = lt @ lt
    eye = np.eye(lt.shape[0])
    u = uu.ravel()
    w = u ** 2 + vv.ravel() ** 2
    out = np.empty(u.shape)
    for start in range(0, u.size, chunk):
        sl = slice(start, start + chunk)
        q = l2 - 2.0 * u[sl, None, None] * lt + w[sl, None, None] * eye
        out[sl] = smallest_singular(q)
    return out.reshape(uu.shape)


def _refine(T: ParavectorOperator, u: float, v: float, step: float, halvings: int) -> tuple[float, float, float]:
    """Compass search on sigma_min(Q_{u+jv}(T)) with step halving."""
    dirs = np.array([(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)], dtype=float)
    best = float(_sigma_grid(T, np.array([u]), np.array([v]))[0])
    done = 0
    moves = 0
    while done < halvings and moves < 50 * (halvings + 1):
        cand = np.array([u, v]) + step * dirs
        cand[:, 1] = np.abs(cand[:, 1])
        vals = _sigma_grid(T, cand[:, 0], cand[:, 1])
        k = int(np.argmin(vals))
        if vals[k] < best:
            u, v, best = float(cand[k, 0]), float(cand[k, 1]), float(vals[k])
            moves += 1
        else:
            step *= 0.5
            done += 1
    return u, v, best


def s_spectrum_scan(T: ParavectorOperator, window: tuple[float, float, float] | None = None,
                    step: float | None = None, refine: int = 30,
                    accept: float | None = None) -> SSpectrumEstimate:
    """Locate the S-spectrum from local minima of sigma_min over a (u, v) grid.

    ``window`` is ``(u0, u1, v1)`` covering ``[u0, u1] x [0, v1]``; by default it
    is ``[-1.2 R, 1.2 R] x [0, 1.2 R]`` with ``R`` the component-norm sum, grid
    step ``R / 50``.  Local minima are refined by compass search and kept when
    the refined sigma_min is below ``accept``.
    """
    scale = T.component_norm if T.component_norm > 0 else 1.0
    if window is None:
        window = (-1.2 * scale, 1.2 * scale, 1.2 * scale)
    u0, u1, v1 = map(float, window)
    if not (u1 > u0 and v1 > 0):
        raise ValueError("window must satisfy u0 < u1 and v1 > 0")
    step = float(step) if step is not None else scale / 50.0
    if accept is None:
        accept = 1e-8 * max(1.0, scale ** 2)
    us = np.linspace(u0, u1, max(2, int(round((u1 - u0) / step)) + 1))
    vs = np.linspace(0.0, v1, max(2, int(round(v1 / step)) + 1))
    uu, vv = np.meshgrid(us, vs, indexing="ij")
    sig = _sigma_grid(T, uu, vv)

    # Neighbors across v = 0 are mirror images, since sigma depends on v^2.
    padded = np.full((sig.shape[0] + 2, sig.shape[1] + 2), np.inf)
    padded[1:-1, 1:-1] = sig
    padded[1:-1, 0] = sig[:, 1]
    is_min = np.ones(sig.shape, dtype=bool)
    for du in (-1, 0, 1):
        for dv in (-1, 0, 1):
            if du == dv == 0:
                continue
            nb = padded[1 + du:1 + du + sig.shape[0], 1 + dv:1 + dv + sig.shape[1]]
            is_min &= sig <= nb
    cand = np.argwhere(is_min)

    hits = []
    for iu, iv in cand:
        u, v, r = _refine(T, float(us[iu]), float(vs[iv]), step, refine)
        if r < accept:
            hits.append((u, v, r))
    hits.sort(key=lambda p: p[2])
    merged: list[tuple[float, float, float]] = []
    for p in hits:
        if all(np.hypot(p[0] - q[0], p[1] - q[1]) > 1e-5 * scale for q in merged):
            merged.append(p)
    merged.sort()
    return SSpectrumEstimate(tuple(merged), (u0, u1, v1), step, refine, int(len(cand)))
