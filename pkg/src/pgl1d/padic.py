"""Truncated 2-adic integers and the unramified cubic extension W = Q2(w).

``w`` is a primitive 7th root of unity.  Its minimal polynomial over Z2 is the
Hensel lift of ``x^3 + x + 1`` (one of the two cubic factors of the 7th
cyclotomic polynomial mod 2).  Elements of O_W are stored as coordinate
triples on the basis ``1, w, w^2`` modulo ``2^N``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

SEED_CUBIC = (1, 1, 0, 1)  # x^3 + x + 1, low degree first
DEGREE = 3
Q = 2  # residue characteristic == size of O_K / m_K


class PrecisionError(ValueError):
    """Operands carry different working precisions."""


class NotInvertibleError(ArithmeticError):
    pass


def v2(n: int) -> int:
    """2-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("v2(0) is infinite")
    return (n & -n).bit_length() - 1


def inverse_mod_2k(a: int, k: int) -> int:
    """Inverse of an odd integer modulo 2^k by Newton iteration."""
    if not a & 1:
        raise NotInvertibleError(f"{a} is even, not a unit of Z/2^{k}")
    mod = 1 << k
    x = a % mod  # correct to 3 bits: a*a == 1 mod 8 for odd a
    bits = 3
    while bits < k:
        x = x * (2 - a * x) % mod
        bits *= 2
    return x % mod


@dataclass(frozen=True, slots=True)
class TruncatedInteger:
    """A 2-adic integer known modulo ``2**precision``."""

    value: int
    precision: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be positive")
        object.__setattr__(self, "value", self.value % (1 << self.precision))

    def _coerce(self, other) -> tuple[int, int]:
        if isinstance(other, TruncatedInteger):
            return other.value, min(self.precision, other.precision)
        if isinstance(other, int):
            return other, self.precision
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return TruncatedInteger(self.value + c[0], c[1])

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return TruncatedInteger(self.value - c[0], c[1])

    def __rsub__(self, other):
        return TruncatedInteger(other - self.value, self.precision)

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return TruncatedInteger(self.value * c[0], c[1])

    __rmul__ = __mul__

    def __neg__(self):
        return TruncatedInteger(-self.value, self.precision)

    def __pow__(self, e: int):
        return TruncatedInteger(pow(self.value, e, 1 << self.precision), self.precision)

    def __eq__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return c
        return (self.value - c[0]) % (1 << c[1]) == 0

    def __hash__(self):
        return hash((self.value, self.precision))

    def __int__(self):
        return self.value

    def inverse(self) -> TruncatedInteger:
        return TruncatedInteger(inverse_mod_2k(self.value, self.precision), self.precision)

    def valuation(self) -> int:
        """2-adic valuation, capped at the precision for zero."""
        return self.precision if self.value == 0 else v2(self.value)

    def truncate(self, precision: int) -> TruncatedInteger:
        return TruncatedInteger(self.value, min(precision, self.precision))

    def __repr__(self):
        return f"{self.value} (mod 2^{self.precision})"


# -- the residue field F8 ----------------------------------------------------

def _f8_mul_bits(a: int, b: int) -> int:
    r = 0
    for i in range(3):
        if b >> i & 1:
            r ^= a << i
    for i in (4, 3):  # reduce by x^3 = x + 1
        if r >> i & 1:
            r ^= 0b1011 << (i - 3)
    return r


@dataclass(frozen=True, slots=True)
class ResidueFieldElement:
    """Element of F8 = F2[x]/(x^3 + x + 1); bit j is the coefficient of x^j."""

    bits: int

    def __post_init__(self):
        if not 0 <= self.bits < 8:
            raise ValueError(f"F8 element must be 3 bits, got {self.bits}")

    def __add__(self, other):
        return ResidueFieldElement(self.bits ^ other.bits)

    __sub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        return ResidueFieldElement(_f8_mul_bits(self.bits, other.bits))

    def __pow__(self, e: int):
        if self.bits == 0:
            if e == 0:
                return ResidueFieldElement(1)
            if e < 0:
                raise NotInvertibleError("0 has no inverse in F8")
            return self
        e %= 7
        r = ResidueFieldElement(1)
        for _ in range(e):
            r = r * self
        return r

    def inverse(self) -> ResidueFieldElement:
        return self ** -1

    def __bool__(self):
        return self.bits != 0

    @classmethod
    def all(cls) -> list[ResidueFieldElement]:
        return [cls(b) for b in range(8)]

    @classmethod
    def units(cls) -> list[ResidueFieldElement]:
        return [cls(b) for b in range(1, 8)]


def f8_power_map_bijective(i: int) -> bool:
    """Whether ``b -> b^(4^i - 1)`` permutes the nonzero elements of F8."""
    if i < 1:
        raise ValueError("i must be positive")
    e = 2 ** (2 * i) - 1
    image = {(b ** e).bits for b in ResidueFieldElement.units()}
    return len(image) == 7


def f8_artin_schreier_solvable(i: int) -> bool:
    """Whether ``b^(4^i) - b = 1`` has a solution b in F8."""
    if i < 1:
        raise ValueError("i must be positive")
    e = 2 ** (2 * i)
    one = ResidueFieldElement(1)
    return any(b ** e - b == one for b in ResidueFieldElement.all())


# -- polynomials over Z/2^m (lists, low degree first) ------------------------

def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b, mod):
    r = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                r[i + j] += x * y
    return [c % mod for c in r]


def _padd(a, b, mod):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % mod for i in range(n)]


def _pdivmod(a, b, mod):
    """Division by a monic polynomial b."""
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [0], _trim(a)
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % mod
        if c:
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % mod
    return _trim(q), _trim([c % mod for c in a[:db]] or [0])


def _bezout_f2(a, b):
    """(s, t) with s*a + t*b == 1 over F2, for coprime a, b."""
    r0, r1 = _trim(a), _trim(b)
    s0, s1, t0, t1 = [1], [0], [0], [1]
    while _trim(r1) != [0]:
        q, r = _pdivmod(r0, r1, 2)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pmul(q, s1, 2), 2)
        t0, t1 = t1, _padd(t0, _pmul(q, t1, 2), 2)
    if _trim(r0) != [1]:
        raise ArithmeticError("polynomials are not coprime mod 2")
    return _trim(s0), _trim(t0)


@functools.lru_cache(maxsize=None)
def hensel_lift_cubic(precision: int) -> tuple[int, int, int, int]:
    """Monic cubic factor of ``x^7 - 1`` mod ``2^precision`` lifting ``x^3 + x + 1``.

    Returns coefficients low degree first; the leading coefficient is 1.
    The factorisation ``x^7 - 1 = f*h`` is lifted one binary digit at a time
    using a fixed Bezout relation ``s*h + t*f = 1`` mod 2.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    big = [-1, 0, 0, 0, 0, 0, 0, 1]
    f0 = list(SEED_CUBIC)
    h0, rem = _pdivmod([c % 2 for c in big], f0, 2)
    assert rem == [0]
    s, t = _bezout_f2(h0, f0)
    f, h = list(f0), list(h0)
    for m in range(1, precision):
        mod = 1 << (m + 1)
        fh = _pmul(f, h, mod)
        err = [((big[i] if i < len(big) else 0) - (fh[i] if i < len(fh) else 0)) % mod for i in range(8)]
        assert all(c % (1 << m) == 0 for c in err)
        e = [(c >> m) & 1 for c in err]
        q, df = _pdivmod(_pmul(s, e, 2), f0, 2)
        dh = _padd(_pmul(t, e, 2), _pmul(q, h0, 2), 2)
        f = _padd(f, [c << m for c in df], mod)
        h = _padd(h, [c << m for c in dh], mod)
    mod = 1 << precision
    f = [c % mod for c in f] + [0] * (4 - len(f))
    return tuple(f[:4])


# -- O_W ----------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class UnramifiedElement:
    """c0 + c1*w + c2*w^2 in O_W, coordinates modulo 2^precision."""

    c: tuple[int, int, int]
    precision: int

    def __post_init__(self):
        mod = 1 << self.precision
        object.__setattr__(self, "c", tuple(x % mod for x in self.c))

    @classmethod
    def from_int(cls, n: int, precision: int) -> UnramifiedElement:
        return cls((n, 0, 0), precision)

    @classmethod
    def zero(cls, precision: int) -> UnramifiedElement:
        return cls((0, 0, 0), precision)

    @classmethod
    def one(cls, precision: int) -> UnramifiedElement:
        return cls((1, 0, 0), precision)

    @classmethod
    def gen(cls, precision: int) -> UnramifiedElement:
        """The root of unity w."""
        return cls((0, 1, 0), precision)

    @property
    def coeffs(self) -> tuple[TruncatedInteger, ...]:
        return tuple(TruncatedInteger(x, self.precision) for x in self.c)

    def _check(self, other: UnramifiedElement):
        if self.precision != other.precision:
            raise PrecisionError(f"precision {self.precision} != {other.precision}")

    def __add__(self, other):
        if isinstance(other, int):
            other = UnramifiedElement.from_int(other, self.precision)
        self._check(other)
        return UnramifiedElement(tuple(a + b for a, b in zip(self.c, other.c)), self.precision)

    __radd__ = __add__

    def __neg__(self):
        return UnramifiedElement(tuple(-a for a in self.c), self.precision)

    def __sub__(self, other):
        if isinstance(other, int):
            other = UnramifiedElement.from_int(other, self.precision)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return UnramifiedElement(tuple(a * other for a in self.c), self.precision)
        return w_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return w_inv(self) ** (-e)
        result = UnramifiedElement.one(self.precision)
        base = self
        while e:
            if e & 1:
                result = w_mul(result, base)
            base = w_mul(base, base)
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = UnramifiedElement.from_int(other, self.precision)
        if not isinstance(other, UnramifiedElement):
            return NotImplemented
        return self.precision == other.precision and self.c == other.c

    def __hash__(self):
        return hash((self.c, self.precision))

    def residue(self) -> ResidueFieldElement:
        return ResidueFieldElement(sum((x & 1) << j for j, x in enumerate(self.c)))

    def is_unit(self) -> bool:
        return bool(self.residue())

    def valuation(self) -> int:
        """Minimum 2-adic valuation of the coordinates (capped at precision)."""
        return min(TruncatedInteger(x, self.precision).valuation() for x in self.c)

    def is_zero(self) -> bool:
        return not any(self.c)

    def truncate(self, precision: int) -> UnramifiedElement:
        return UnramifiedElement(self.c, min(precision, self.precision))

    def __repr__(self):
        return f"UnramifiedElement({self.c}, N={self.precision})"


def w_mul(a: UnramifiedElement, b: UnramifiedElement) -> UnramifiedElement:
    if a.precision != b.precision:
        raise PrecisionError(f"precision {a.precision} != {b.precision}")
    n = a.precision
    f0, f1, f2, _ = hensel_lift_cubic(n)
    a0, a1, a2 = a.c
    b0, b1, b2 = b.c
    p0 = a0 * b0
    p1 = a0 * b1 + a1 * b0
    p2 = a0 * b2 + a1 * b1 + a2 * b0
    p3 = a1 * b2 + a2 * b1
    p4 = a2 * b2
    # w^3 = -(f2 w^2 + f1 w + f0); fold w^4 first
    p3 -= p4 * f2
    p2 -= p4 * f1
    p1 -= p4 * f0
    p2 -= p3 * f2
    p1 -= p3 * f1
    p0 -= p3 * f0
    return UnramifiedElement((p0, p1, p2), n)


def w_inv(a: UnramifiedElement) -> UnramifiedElement:
    """Inverse of a unit of O_W via the Galois norm: a^-1 = s(a) s^2(a) / N(a)."""
    if not a.is_unit():
        raise NotInvertibleError(f"{a} is not a unit of O_W")
    conj = w_mul(frobenius(a, 1), frobenius(a, 2))
    nrm = w_mul(a, conj)
    assert nrm.c[1] == 0 and nrm.c[2] == 0, "norm left Z2"
    return conj * inverse_mod_2k(nrm.c[0], a.precision)


@functools.lru_cache(maxsize=None)
def _frobenius_images(precision: int, e: int) -> tuple[UnramifiedElement, ...]:
    """Images of 1, w, w^2 under w -> w^(2^e)."""
    g = UnramifiedElement.gen(precision) ** (2 ** e)
    return (UnramifiedElement.one(precision), g, w_mul(g, g))


def frobenius(a: UnramifiedElement, power: int = 1) -> UnramifiedElement:
    """The automorphism w -> w^(2^power) of O_W (power taken mod 3)."""
    e = power % DEGREE
    if e == 0:
        return a
    img = _frobenius_images(a.precision, e)
    out = [0, 0, 0]
    for coef, basis in zip(a.c, img):
        if coef:
            for j in range(3):
                out[j] += coef * basis.c[j]
    return UnramifiedElement(tuple(out), a.precision)


def norm_trace_W(a: UnramifiedElement) -> tuple[TruncatedInteger, TruncatedInteger]:
    """Galois norm and trace of W/Q2."""
    s1, s2 = frobenius(a, 1), frobenius(a, 2)
    nrm = w_mul(w_mul(a, s1), s2)
    tr = a + s1 + s2
    for name, x in (("norm", nrm), ("trace", tr)):
        if x.c[1] or x.c[2]:
            raise ArithmeticError(f"Galois {name} {x} has nonzero w-coordinates")
    return TruncatedInteger(nrm.c[0], a.precision), TruncatedInteger(tr.c[0], a.precision)


def teichmuller(c: ResidueFieldElement, precision: int) -> UnramifiedElement:
    """The lift t of c with t^8 = t, by iterating t -> t^8 from the naive lift."""
    t = UnramifiedElement(tuple((c.bits >> j) & 1 for j in range(3)), precision)
    while True:
        t8 = t ** 8
        if t8 == t:
            return t
        t = t8
