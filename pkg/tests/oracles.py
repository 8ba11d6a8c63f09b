"""Reference computations that share no code with the package.

Blade products are computed from explicit index lists by bubble sort, so the
bitmask sign formula in the library is checked against a different route.
"""

from __future__ import annotations

import itertools

import numpy as np


def blade_indices(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


def blade_mask(indices) -> int:
    out = 0
    for i in indices:
        out |= 1 << (i - 1)
    return out


def word_product(a: list[int], b: list[int]) -> tuple[int, list[int]]:
    """Reduce the word e_a1 ... e_ak e_b1 ... e_bl to sign * canonical blade."""
    word = list(a) + list(b)
    sign = 1
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - 1):
            if word[i] > word[i + 1]:
                word[i], word[i + 1] = word[i + 1], word[i]
                sign = -sign
                changed = True
            elif word[i] == word[i + 1]:
                # e_i e_i = -1
                del word[i:i + 2]
                sign = -sign
                changed = True
                break
    return sign, word


def mv_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    out = np.zeros(d)
    for i, j in itertools.product(range(d), range(d)):
        if a[i] == 0 or b[j] == 0:
            continue
        sign, word = word_product(blade_indices(i), blade_indices(j))
        out[blade_mask(word)] += sign * a[i] * b[j]
    return out


def quaternion_mul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Hamilton product in the order (1, i, j, k)."""
    a1, b1, c1, d1 = p
    a2, b2, c2, d2 = q
    return np.array([
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ])


def paravector(parts, n: int) -> np.ndarray:
    out = np.zeros(1 << n)
    out[0] = parts[0]
    for i, x in enumerate(parts[1:]):
        out[1 << i] = x
    return out


def pv_conj(x: np.ndarray) -> np.ndarray:
    out = -x.copy()
    out[0] = x[0]
    return out


def pv_inv(x: np.ndarray) -> np.ndarray:
    return pv_conj(x) / float(np.sum(x ** 2))


def power(x: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros_like(x)
    out[0] = 1.0
    for _ in range(k):
        out = mv_mul(out, x)
    return out


def eval_left_poly(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum_u x^u A_u by explicit powers."""
    return sum(mv_mul(power(x, u), a) for u, a in enumerate(coeffs))


def eval_right_poly(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    return sum(mv_mul(a, power(x, u)) for u, a in enumerate(coeffs))


def eval_left_poly_slice(components, x: np.ndarray) -> np.ndarray:
    xc = pv_conj(x)
    return sum(mv_mul(power(xc, k), eval_left_poly(c, x)) for k, c in enumerate(components))


def eval_right_poly_slice(components, x: np.ndarray) -> np.ndarray:
    xc = pv_conj(x)
    return sum(mv_mul(eval_right_poly(c, x), power(xc, k)) for k, c in enumerate(components))


def embed(z: complex, jvec: np.ndarray, n: int) -> np.ndarray:
    return paravector(np.concatenate([[z.real], z.imag * np.asarray(jvec)]), n)


def left_matrix(a: np.ndarray) -> np.ndarray:
    """Matrix of y -> a y on coefficient vectors."""
    d = a.shape[0]
    return np.stack([mv_mul(a, np.eye(d)[k]) for k in range(d)], axis=1)


def right_matrix(a: np.ndarray) -> np.ndarray:
    d = a.shape[0]
    return np.stack([mv_mul(np.eye(d)[k], a) for k in range(d)], axis=1)


def lift(components: np.ndarray, n: int) -> np.ndarray:
    """Realization of T = T_0 + sum e_i T_i acting on R_n (x) R^m with index B*m + i."""
    m = components.shape[1]
    d = 1 << n
    out = np.kron(np.eye(d), components[0])
    for i in range(1, n + 1):
        out = out + np.kron(left_matrix(np.eye(d)[1 << (i - 1)]), components[i])
    return out
