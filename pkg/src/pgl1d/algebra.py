"""The valuation ring O_D of the degree-3 cyclic division algebra over Q2.

D is generated over W = Q2(w) by ``pi`` with ``pi^3 = 2`` and
``pi^-1 * v * pi = alpha(v)`` where ``alpha = frobenius^r``.  Equivalently
``v * pi = pi * alpha(v)``.

Elements are stored on the right W-basis: ``x = a0 + pi*a1 + pi^2*a2`` with
``a_i`` in O_W.  With this layout left multiplication by ``x`` is a W-linear
map of D (viewed as a right W-space) and its matrix gives the reduced trace
and norm directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .padic import (
    NotInvertibleError,
    PrecisionError,
    TruncatedInteger,
    UnramifiedElement,
    frobenius,
    w_inv,
    w_mul,
)

D = 3  # index of the algebra
PI_K = 2


@dataclass(frozen=True)
class AlgebraConfig:
    r_param: int = 1
    precision: int = 6

    def __post_init__(self):
        if self.r_param not in (1, 2):
            raise ValueError(f"r_param must be 1 or 2, got {self.r_param}")
        if self.precision < 1:
            raise ValueError("precision must be positive")

    def alpha(self, a: UnramifiedElement, times: int = 1) -> UnramifiedElement:
        """alpha^times = frobenius^(r * times)."""
        return frobenius(a, self.r_param * times)


class ConfigMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class AlgebraElement:
    a: tuple[UnramifiedElement, UnramifiedElement, UnramifiedElement]
    config: AlgebraConfig

    def __post_init__(self):
        n = self.config.precision
        if any(x.precision != n for x in self.a):
            raise PrecisionError("coordinates must share the config precision")

    # constructors
    @classmethod
    def from_coords(cls, coords, config: AlgebraConfig) -> AlgebraElement:
        """From 9 integers ordered (a0.c0, a0.c1, a0.c2, a1.c0, ...)."""
        coords = list(coords)
        n = config.precision
        return cls(tuple(UnramifiedElement(tuple(coords[3 * i:3 * i + 3]), n) for i in range(3)), config)

    @classmethod
    def scalar(cls, a, config: AlgebraConfig) -> AlgebraElement:
        n = config.precision
        if isinstance(a, int):
            a = UnramifiedElement.from_int(a, n)
        z = UnramifiedElement.zero(n)
        return cls((a, z, z), config)

    @classmethod
    def one(cls, config: AlgebraConfig) -> AlgebraElement:
        return cls.scalar(1, config)

    @classmethod
    def zero(cls, config: AlgebraConfig) -> AlgebraElement:
        return cls.scalar(0, config)

    @classmethod
    def w(cls, config: AlgebraConfig) -> AlgebraElement:
        return cls.scalar(UnramifiedElement.gen(config.precision), config)

    @classmethod
    def pi(cls, config: AlgebraConfig) -> AlgebraElement:
        n = config.precision
        z = UnramifiedElement.zero(n)
        return cls((z, UnramifiedElement.one(n), z), config)

    @classmethod
    def pi_power(cls, j: int, coeff: UnramifiedElement, config: AlgebraConfig) -> AlgebraElement:
        """pi^j * coeff, folding pi^3 = 2."""
        q, i = divmod(j, 3)
        z = UnramifiedElement.zero(config.precision)
        a = [z, z, z]
        a[i] = coeff * (PI_K ** q)
        return cls(tuple(a), config)

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(c for x in self.a for c in x.c)

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            raise TypeError(f"expected AlgebraElement, got {type(other).__name__}")
        if self.config != other.config:
            raise ConfigMismatchError(f"{self.config} != {other.config}")

    def __add__(self, other):
        if isinstance(other, int):
            other = AlgebraElement.scalar(other, self.config)
        self._check(other)
        return AlgebraElement(tuple(x + y for x, y in zip(self.a, other.a)), self.config)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(tuple(-x for x in self.a), self.config)

    def __sub__(self, other):
        if isinstance(other, int):
            other = AlgebraElement.scalar(other, self.config)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return AlgebraElement(tuple(x * other for x in self.a), self.config)
        return d_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, e: int):
        if e < 0:
            return d_inv(self) ** (-e)
        result = AlgebraElement.one(self.config)
        base = self
        while e:
            if e & 1:
                result = d_mul(result, base)
            base = d_mul(base, base)
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = AlgebraElement.scalar(other, self.config)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.config == other.config and self.a == other.a

    def __hash__(self):
        return hash((self.a, self.config))

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.a)

    def __repr__(self):
        return f"AlgebraElement({self.coords}, r={self.config.r_param}, N={self.config.precision})"


def d_mul(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """(pi^i a)(pi^j b) = pi^(i+j) alpha^j(a) b, with pi^3 = 2."""
    x._check(y)
    cfg = x.config
    out = [UnramifiedElement.zero(cfg.precision)] * 3
    for j, b in enumerate(y.a):
        if b.is_zero():
            continue
        for i, a in enumerate(x.a):
            if a.is_zero():
                continue
            term = w_mul(cfg.alpha(a, j), b)
            if i + j >= 3:
                term = term * PI_K
            out[(i + j) % 3] = out[(i + j) % 3] + term
    return AlgebraElement(tuple(out), cfg)


def d_valuation(x: AlgebraElement) -> float:
    """m_D-adic valuation min(3*v2(a_i) + i); ``math.inf`` if x vanishes at precision."""
    if x.is_zero():
        return math.inf
    return min(3 * a.valuation() + i for i, a in enumerate(x.a) if not a.is_zero())


def d_inv(x: AlgebraElement) -> AlgebraElement:
    """Inverse of a unit of O_D by Newton iteration z -> z(2 - xz)."""
    a0 = x.a[0]
    if not a0.is_unit():
        raise NotInvertibleError(f"{x} is not a unit of O_D (valuation {d_valuation(x)})")
    z = AlgebraElement.scalar(w_inv(a0), x.config)
    one = AlgebraElement.one(x.config)
    while True:
        xz = d_mul(x, z)
        if xz == one:
            return z
        z = d_mul(z, 2 - xz)


def left_regular_matrix(x: AlgebraElement) -> list[list[UnramifiedElement]]:
    """Matrix over W of y -> x*y in the right W-basis 1, pi, pi^2.

    Column j is x * pi^j = sum_i pi^(i+j) alpha^j(a_i).
    """
    cfg = x.config
    n = cfg.precision
    m = [[UnramifiedElement.zero(n) for _ in range(3)] for _ in range(3)]
    for j in range(3):
        for i, a in enumerate(x.a):
            entry = cfg.alpha(a, j)
            if i + j >= 3:
                entry = entry * PI_K
            m[(i + j) % 3][j] = entry
    return m


def _det3(m):
    def mul(*xs):
        r = xs[0]
        for x in xs[1:]:
            r = w_mul(r, x)
        return r

    return (mul(m[0][0], m[1][1], m[2][2]) + mul(m[0][1], m[1][2], m[2][0])
            + mul(m[0][2], m[1][0], m[2][1]) - mul(m[0][2], m[1][1], m[2][0])
            - mul(m[0][0], m[1][2], m[2][1]) - mul(m[0][1], m[1][0], m[2][2]))


def _to_z2(u: UnramifiedElement, what: str) -> TruncatedInteger:
    if u.c[1] or u.c[2]:
        raise ArithmeticError(f"{what} {u} does not lie in Z2")
    return TruncatedInteger(u.c[0], u.precision)


def reduced_trace(x: AlgebraElement) -> TruncatedInteger:
    m = left_regular_matrix(x)
    return _to_z2(m[0][0] + m[1][1] + m[2][2], "reduced trace")


def reduced_norm(x: AlgebraElement) -> TruncatedInteger:
    return _to_z2(_det3(left_regular_matrix(x)), "reduced norm")


def lie_bracket(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return d_mul(x, y) - d_mul(y, x)


def in_sl1(x: AlgebraElement) -> bool:
    return reduced_trace(x) == 0
