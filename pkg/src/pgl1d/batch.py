"""Vectorised O_D arithmetic on coordinate arrays.

A batch of n elements is an int64 array of shape (9, n); row ``3*i + j`` holds
the coefficient of ``w^j`` in ``a_i`` where ``x = a0 + pi*a1 + pi^2*a2``.
All arithmetic is modulo ``2^N``; ``2^N O_D`` is a two-sided ideal so nothing
is lost by reducing coordinates independently.
"""

from __future__ import annotations

import functools

import numpy as np

from .algebra import AlgebraConfig, AlgebraElement
from .padic import UnramifiedElement, frobenius, hensel_lift_cubic


@functools.lru_cache(maxsize=None)
def _frob_matrix(precision: int, e: int) -> np.ndarray:
    cols = []
    for j in range(3):
        basis = UnramifiedElement(tuple(int(i == j) for i in range(3)), precision)
        cols.append(frobenius(basis, e).c)
    return np.array(cols, dtype=np.int64).T


class BatchAlgebra:
    def __init__(self, config: AlgebraConfig):
        self.config = config
        self.N = config.precision
        self.mask = (1 << self.N) - 1
        self.cubic = hensel_lift_cubic(self.N)
        self._alpha = [_frob_matrix(self.N, (config.r_param * j) % 3) for j in range(3)]

    def from_elements(self, elements) -> np.ndarray:
        return np.array([x.coords for x in elements], dtype=np.int64).T.reshape(9, -1)

    def to_elements(self, x: np.ndarray) -> list[AlgebraElement]:
        return [AlgebraElement.from_coords(col, self.config) for col in x.T.tolist()]

    def constant(self, element: AlgebraElement, n: int) -> np.ndarray:
        return np.repeat(np.array(element.coords, dtype=np.int64)[:, None], n, axis=1)

    def one(self, n: int) -> np.ndarray:
        x = np.zeros((9, n), dtype=np.int64)
        x[0] = 1
        return x

    def _wmul(self, a, b):
        f0, f1, f2, _ = self.cubic
        a0, a1, a2 = a
        b0, b1, b2 = b
        p0 = a0 * b0
        p1 = a0 * b1 + a1 * b0
        p2 = a0 * b2 + a1 * b1 + a2 * b0
        p3 = a1 * b2 + a2 * b1
        p4 = a2 * b2
        p3 -= p4 * f2
        p2 -= p4 * f1
        p1 -= p4 * f0
        p2 -= p3 * f2
        p1 -= p3 * f1
        p0 -= p3 * f0
        m = self.mask
        return p0 & m, p1 & m, p2 & m

    def _alpha_apply(self, a, j):
        if j % 3 == 0:
            return a
        mat = self._alpha[j % 3]
        return tuple(sum(int(mat[r, c]) * a[c] for c in range(3) if mat[r, c]) for r in range(3))

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        xs = [x[3 * i:3 * i + 3] for i in range(3)]
        ys = [y[3 * j:3 * j + 3] for j in range(3)]
        n = np.broadcast_shapes(x.shape, y.shape)[1]
        out = np.zeros((9, n), dtype=np.int64)
        for j in range(3):
            for i in range(3):
                term = self._wmul(self._alpha_apply(tuple(xs[i]), j), tuple(ys[j]))
                s = 3 * ((i + j) % 3)
                scale = 2 if i + j >= 3 else 1
                for c in range(3):
                    out[s + c] += scale * term[c]
        out &= self.mask
        return out

    def inverse_principal(self, x: np.ndarray) -> np.ndarray:
        """Inverse of elements congruent to 1 mod m_D (Newton from z = 1)."""
        z = self.one(x.shape[1])
        target = 3 * self.N
        v = 1
        two = self.one(x.shape[1]) * 2
        while v < target:
            z = self.mul(z, (two - self.mul(x, z)) & self.mask)
            v *= 2
        return z
