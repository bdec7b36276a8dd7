"""The finite 2-groups U1/Uk.

Here ``U_i`` is the image of ``1 + m_D^i`` in ``D*/Z(D*)``.  A coset is
represented by its canonical lift ``x = a0 + pi*a1 + pi^2*a2`` with the
Z2-coordinate of ``a0`` equal to 1 and coordinates of ``a_i`` reduced modulo
``2^ceil((k-i)/3)``.

Encoding
--------
``x - 1`` has a binary digit at each pi-adic level ``t = 3*s + i``
(1 <= t < k): bit ``s`` of the three coordinates of ``a_i``.  At levels
``t = 0 mod 3`` the Z2-coordinate bit is pinned by the canonical form, so
those levels carry 2 free bits, the others 3.  Level ``k-1`` sits in the
lowest bits and level 1 in the highest, so

* ``U_i/U_k`` is exactly the code range ``[0, |U_i/U_k|)``,
* the identity is code 0,
* truncation ``U1/Uk -> U1/Uj`` is a right shift.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraConfig, AlgebraElement, d_inv, d_mul, d_valuation
from .batch import BatchAlgebra
from .padic import ResidueFieldElement, UnramifiedElement, inverse_mod_2k, teichmuller

CHUNK = 1 << 20


class InfeasibleError(RuntimeError):
    """Requested computation exceeds the supported size."""

    def __init__(self, message: str, estimate_bytes: int | None = None):
        super().__init__(message)
        self.estimate_bytes = estimate_bytes


def precision_for(k: int) -> int:
    return -(-k // 3) + 2


def level_width(t: int) -> int:
    return 2 if t % 3 == 0 else 3


def quotient_order_log2(k: int) -> int:
    """log2 |U1/Uk| = log2(8^(k-1) / 2^(ceil(k/3) - 1))."""
    return 3 * (k - 1) - (-(-k // 3) - 1)


class QuotientContext:
    """Shared, read-only data for computing in U1/Uk."""

    def __init__(self, k: int, r_param: int = 1):
        if k < 2:
            raise ValueError(f"k must be >= 2, got {k}")
        self.k = k
        self.config = AlgebraConfig(r_param=r_param, precision=precision_for(k))
        self.batch = BatchAlgebra(self.config)
        self.N = self.config.precision
        # a_i coordinates live modulo 2^exps[i]
        self.exps = tuple(-(-(k - i) // 3) for i in range(3))
        self.width = {t: level_width(t) for t in range(1, k)}
        self.offset = {}
        acc = 0
        for t in range(k - 1, 0, -1):
            self.offset[t] = acc
            acc += self.width[t]
        self.bits = acc
        assert self.bits == quotient_order_log2(k)
        self.order = 1 << self.bits
        # bits of U_t/U_k for t = 1..k
        self.sub_bits = {t: (self.offset[t] + self.width[t] if t < k else 0) for t in range(1, k + 1)}
        # code bit position -> (coordinate row, binary digit)
        self.bit_layout: list[tuple[int, int]] = [None] * self.bits
        for t in range(1, k):
            i, s = t % 3, t // 3
            js = (0, 1, 2) if i else (1, 2)
            for idx, j in enumerate(js):
                self.bit_layout[self.offset[t] + idx] = (3 * i + j, s)
        self._coord_exp = np.array([self.exps[c // 3] for c in range(9)])
        self._build_tables()

    # -- bookkeeping ---------------------------------------------------------
    @property
    def r_param(self) -> int:
        return self.config.r_param

    def subquotient_size(self, i: int) -> int:
        """|U_i/U_k|."""
        return 1 << self.sub_bits[i]

    def shift_to(self, j: int) -> int:
        """Right shift realising the truncation U1/Uk -> U1/Uj."""
        if not 1 <= j <= self.k:
            raise ValueError(f"truncation level {j} outside [1, {self.k}]")
        return self.sub_bits[j]

    def __repr__(self):
        return f"QuotientContext(k={self.k}, r_param={self.r_param}, N={self.N}, order=2^{self.bits})"

    def _build_tables(self):
        k = self.k
        nbytes = max(1, -(-self.bits // 8))
        self._nbytes = nbytes
        contrib = np.zeros((nbytes, 256, 9), dtype=np.int64)
        for b in range(nbytes):
            for v in range(256):
                for q in range(8):
                    pos = 8 * b + q
                    if v >> q & 1 and pos < self.bits:
                        c, s = self.bit_layout[pos]
                        contrib[b, v, c] += 1 << s
        self._contrib = contrib
        # canonical encoding: code bits of coordinate c with value v, after
        # scaling by the inverse of the odd Z2-coordinate z0
        e0 = self.exps[0]
        self._n_inv = 1 << (e0 - 1)
        self._enc = []
        for c in range(1, 9):
            e = self.exps[c // 3]
            tab = np.zeros((self._n_inv, 1 << e), dtype=np.int64)
            pos_of = {}
            for pos, (cc, s) in enumerate(self.bit_layout):
                if cc == c:
                    pos_of[s] = pos
            for zi in range(self._n_inv):
                inv = inverse_mod_2k(2 * zi + 1, e0)
                for v in range(1 << e):
                    u = (v * inv) % (1 << e)
                    code = 0
                    for s, pos in pos_of.items():
                        if u >> s & 1:
                            code |= 1 << pos
                    tab[zi, v] = code
            self._enc.append(tab.ravel())
        self._level_thresholds = np.array([self.subquotient_size(t) for t in range(k, 0, -1)], dtype=np.int64)

    # -- vectorised codecs -----------------------------------------------------
    def decode(self, codes) -> np.ndarray:
        """Canonical coordinate arrays (9, n) for an array of codes."""
        codes = np.asarray(codes, dtype=np.int64)
        out = np.zeros((9, codes.size), dtype=np.int64)
        out[0] = 1
        for b in range(self._nbytes):
            byte = (codes >> (8 * b)) & 255
            out += self._contrib[b][byte].T
        return out

    def encode(self, coords: np.ndarray) -> np.ndarray:
        """Canonical codes of coordinate arrays of elements of 1 + m_D."""
        masks = [(1 << self.exps[c // 3]) - 1 for c in range(9)]
        z0 = coords[0] & masks[0]
        if not np.all(z0 & 1):
            raise ValueError("element is not congruent to 1 modulo m_D")
        zi = z0 >> 1
        code = np.zeros(coords.shape[1], dtype=np.int64)
        for c in range(1, 9):
            e = self.exps[c // 3]
            code += self._enc[c - 1][(zi << e) + (coords[c] & masks[c])]
        return code

    def layers(self, codes) -> np.ndarray:
        """Layer index i with g in U_i minus U_{i+1}; k for the identity."""
        codes = np.asarray(codes, dtype=np.int64)
        # thresholds ascending: |U_k/U_k| = 1, ..., |U_1/U_k|
        return self.k - np.searchsorted(self._level_thresholds, codes, side="right")

    def digit(self, codes, t: int) -> np.ndarray:
        return (np.asarray(codes) >> self.offset[t]) & ((1 << self.width[t]) - 1)

    # -- vectorised group operations ----------------------------------------
    def mul_codes(self, a, b) -> np.ndarray:
        return self.encode(self.batch.mul(self.decode(a), self.decode(b)))

    def inv_codes(self, a) -> np.ndarray:
        return self.encode(self.batch.inverse_principal(self.decode(a)))

    def square_codes(self, a) -> np.ndarray:
        x = self.decode(a)
        return self.encode(self.batch.mul(x, x))

    def order_exponents(self, codes) -> np.ndarray:
        """log2 of element orders."""
        cur = np.array(codes, dtype=np.int64)
        e = np.zeros(cur.size, dtype=np.int64)
        active = np.flatnonzero(cur)
        while active.size:
            for lo in range(0, active.size, CHUNK):
                idx = active[lo:lo + CHUNK]
                cur[idx] = self.square_codes(cur[idx])
            e[active] += 1
            active = active[cur[active] != 0]
        return e

    def truncate(self, codes, j: int) -> np.ndarray:
        return np.asarray(codes, dtype=np.int64) >> self.shift_to(j)

    # -- linear actions --------------------------------------------------------
    def linear_action_matrix(self, images) -> np.ndarray:
        """9x9 integer matrix whose column c holds coordinates of images[c]."""
        return np.array([img.coords for img in images], dtype=np.int64).T

    def conjugation_matrix(self, s: AlgebraElement) -> np.ndarray:
        """Matrix of x -> s^-1 x s."""
        s_inv = d_inv(s)
        return self.linear_action_matrix(d_mul(d_mul(s_inv, e), s) for e in self.basis)

    def right_mult_matrix(self, s: AlgebraElement) -> np.ndarray:
        """Matrix of x -> x s."""
        return self.linear_action_matrix(d_mul(e, s) for e in self.basis)

    @functools.cached_property
    def basis(self) -> tuple[AlgebraElement, ...]:
        return tuple(AlgebraElement.from_coords([int(c == r) for r in range(9)], self.config) for c in range(9))

    def apply_linear(self, matrix: np.ndarray, codes, workers: int = 1) -> np.ndarray:
        """Codes of canon(M x) for x ranging over ``codes``.

        M must map 1 + m_D into itself (conjugations and right
        multiplications by principal units do).
        """
        codes = np.asarray(codes, dtype=np.int64)
        m = np.asarray(matrix, dtype=np.int64) & self.batch.mask
        tables = [(self._contrib[b] @ m.T) & self.batch.mask for b in range(self._nbytes)]
        base = m[:, 0]
        masks = [(1 << self.exps[c // 3]) - 1 for c in range(9)]
        tabs_t = [np.ascontiguousarray(t.T) for t in tables]

        def run(chunk):
            bytes_ = [(chunk >> (8 * b)) & 255 for b in range(self._nbytes)]
            z0 = base[0] + sum(tabs_t[b][0][bytes_[b]] for b in range(self._nbytes))
            zi = (z0 & masks[0]) >> 1
            out = np.zeros(chunk.size, dtype=np.int64)
            for c in range(1, 9):
                e = self.exps[c // 3]
                v = base[c] + sum(tabs_t[b][c][bytes_[b]] for b in range(self._nbytes))
                out += self._enc[c - 1][(zi << e) + (v & masks[c])]
            return out

        chunks = [codes[lo:lo + CHUNK] for lo in range(0, codes.size, CHUNK)]
        if workers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(run, chunks))
        else:
            parts = [run(c) for c in chunks]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)

    # -- generators ----------------------------------------------------------
    @functools.cached_property
    def generators(self) -> list[CosetElement]:
        """1 + pi^j teich(c) for nonzero c in F8 and j = 1, 2, 3."""
        gens = []
        for j in (1, 2, 3):
            for c in ResidueFieldElement.units():
                t = teichmuller(c, self.N)
                gens.append(canonicalize(AlgebraElement.one(self.config) + AlgebraElement.pi_power(j, t, self.config), self))
        return gens

    @functools.cached_property
    def acting_generators(self) -> list[CosetElement]:
        """A generating subset of ``generators`` (greedy, checked on U1/U_min(k,7)).

        Generation is decided in the Frattini quotient.  U_7 = U_4^2 lies in the
        Frattini subgroup of U1, so a set generating U1/U7 generates every U1/Uk.
        """
        ref_k = min(self.k, 7)
        ref = self if ref_k == self.k else QuotientContext(ref_k, self.r_param)
        perms = [right_mult_perm(ref, g) for g in ref.generators]
        chosen: list[int] = []
        mask = np.zeros(ref.order, dtype=bool)
        mask[0] = True
        for idx, g in enumerate(ref.generators):
            if mask[g.code]:
                continue
            chosen.append(idx)
            mask = closure_mask(ref, None, [perms[i] for i in chosen])
            if mask.all():
                break
        if not mask.all():
            raise ArithmeticError("generator list does not generate the group")
        return [self.generators[i] for i in chosen]

    def element(self, code: int) -> CosetElement:
        return CosetElement(self, int(code))

    @property
    def identity(self) -> CosetElement:
        return CosetElement(self, 0)


# -- scalar cosets ---------------------------------------------------------------

class CosetElement:
    """An element of U1/Uk, stored by its canonical code."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx: QuotientContext, code: int):
        if not 0 <= code < ctx.order:
            raise ValueError(f"code {code} outside [0, {ctx.order})")
        self.ctx = ctx
        self.code = code

    @property
    def encoding(self) -> int:
        return self.code

    @property
    def rep(self) -> AlgebraElement:
        coords = [0] * 9
        coords[0] = 1
        for pos, (c, s) in enumerate(self.ctx.bit_layout):
            if self.code >> pos & 1:
                coords[c] |= 1 << s
        return AlgebraElement.from_coords(coords, self.ctx.config)

    def _check(self, other):
        if not isinstance(other, CosetElement) or other.ctx is not self.ctx:
            raise ValueError("cosets belong to different quotient contexts")

    def __mul__(self, other):
        return q_mul(self, other)

    def inverse(self) -> CosetElement:
        return q_inv(self)

    def __pow__(self, e: int) -> CosetElement:
        if e < 0:
            return q_inv(self) ** (-e)
        result, base = self.ctx.identity, self
        while e:
            if e & 1:
                result = q_mul(result, base)
            base = q_mul(base, base)
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, CosetElement):
            return NotImplemented
        return self.ctx is other.ctx and self.code == other.code

    def __hash__(self):
        return hash((id(self.ctx), self.code))

    def __repr__(self):
        return f"CosetElement(code={self.code}, k={self.ctx.k})"


def canonicalize(x: AlgebraElement, ctx: QuotientContext) -> CosetElement:
    """The coset of x in U1/Uk, normalising the central 1 + 2Z2 factor."""
    if x.config != ctx.config:
        raise ValueError("element config does not match the context")
    if d_valuation(x - 1) < 1:
        raise ValueError(f"{x} is not in 1 + m_D")
    coords = list(x.coords)
    inv = inverse_mod_2k(coords[0], ctx.exps[0])
    code = 0
    for pos, (c, s) in enumerate(ctx.bit_layout):
        v = (coords[c] * inv) % (1 << ctx.exps[c // 3])
        if v >> s & 1:
            code |= 1 << pos
    return CosetElement(ctx, code)


def q_mul(g: CosetElement, h: CosetElement) -> CosetElement:
    g._check(h)
    return canonicalize(d_mul(g.rep, h.rep), g.ctx)


def q_inv(g: CosetElement) -> CosetElement:
    return canonicalize(d_inv(g.rep), g.ctx)


def commutator(g: CosetElement, h: CosetElement) -> CosetElement:
    """[g, h] = g^-1 h^-1 g h."""
    return q_inv(g) * q_inv(h) * g * h


def layer_of(g: CosetElement) -> int:
    v = d_valuation(g.rep - 1)
    return g.ctx.k if v == math.inf else min(int(v), g.ctx.k)


def element_order(g: CosetElement) -> int:
    m, x = 1, g
    while x.code != 0:
        x = q_mul(x, x)
        m *= 2
    return m


class CosetRange(Sequence):
    """The cosets with codes in [0, n), i.e. U_i/U_k, in encoding order."""

    def __init__(self, ctx: QuotientContext, n: int):
        self.ctx, self.n = ctx, n

    def __len__(self):
        return self.n

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [CosetElement(self.ctx, c) for c in range(*i.indices(self.n))]
        if i < 0:
            i += self.n
        if not 0 <= i < self.n:
            raise IndexError(i)
        return CosetElement(self.ctx, i)

    def codes(self) -> np.ndarray:
        return np.arange(self.n, dtype=np.int64)


def enumerate_subquotient(i: int, ctx: QuotientContext) -> CosetRange:
    if not 1 <= i <= ctx.k:
        raise ValueError(f"layer {i} outside [1, {ctx.k}]")
    return CosetRange(ctx, ctx.subquotient_size(i))


# -- closures and subgroups -------------------------------------------------

def right_mult_perm(ctx: QuotientContext, s: CosetElement, n: int | None = None) -> np.ndarray:
    n = ctx.order if n is None else n
    return ctx.apply_linear(ctx.right_mult_matrix(s.rep), np.arange(n, dtype=np.int64))


def closure_mask(ctx: QuotientContext, gens, perms=None) -> np.ndarray:
    """Boolean membership mask of the subgroup generated by ``gens``."""
    if perms is None:
        perms = [right_mult_perm(ctx, g) for g in gens]
    seen = np.zeros(ctx.order, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        nxt = np.unique(np.concatenate([p[frontier] for p in perms])) if perms else frontier[:0]
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


def closure_size(ctx: QuotientContext, gens) -> int:
    return int(closure_mask(ctx, gens).sum())


def subgroup_generators(ctx: QuotientContext, mask: np.ndarray) -> list[CosetElement]:
    """Greedy generating set of the subgroup with membership ``mask``."""
    gens, perms = [], []
    current = np.zeros(ctx.order, dtype=bool)
    current[0] = True
    for code in np.flatnonzero(mask):
        if current[code]:
            continue
        g = ctx.element(code)
        gens.append(g)
        perms.append(right_mult_perm(ctx, g))
        current = closure_mask(ctx, gens, perms)
        if current.sum() == mask.sum():
            break
    if not np.array_equal(current, mask):
        raise ValueError("mask is not a subgroup")
    return gens


@dataclass
class Index2Subgroup:
    functional: int
    mask: np.ndarray = field(repr=False)

    def __contains__(self, g) -> bool:
        code = g.code if isinstance(g, CosetElement) else int(g)
        return bool(self.mask[code])

    def __call__(self, g) -> bool:
        return g in self

    def codes(self) -> np.ndarray:
        return np.flatnonzero(self.mask)


@dataclass
class FrattiniData:
    phi_mask: np.ndarray = field(repr=False)  # membership of G2 = [G,G]G^2
    labels: np.ndarray = field(repr=False)  # coordinates of each element in G/G2 = F2^m
    basis: list
    rank: int


MAX_INDEX2_K = 6


def frattini_quotient(ctx: QuotientContext) -> FrattiniData:
    if ctx.k > MAX_INDEX2_K:
        raise InfeasibleError(f"Frattini quotient by closure is limited to k <= {MAX_INDEX2_K}",
                              estimate_bytes=ctx.order * ctx.order)
    allc = np.arange(ctx.order, dtype=np.int64)
    squares = ctx.square_codes(allc)
    gens = ctx.generators
    comms = [commutator(a, b).code for a, b in itertools.combinations(gens, 2)]
    candidates = np.unique(np.concatenate([squares, np.array(comms, dtype=np.int64)]))
    sub_gens, perms = [], []
    phi = np.zeros(ctx.order, dtype=bool)
    phi[0] = True
    for c in candidates:
        if phi[c]:
            continue
        g = ctx.element(c)
        sub_gens.append(g)
        perms.append(right_mult_perm(ctx, g))
        phi = closure_mask(ctx, sub_gens, perms)
    labels = np.full(ctx.order, -1, dtype=np.int64)
    labels[phi] = 0
    basis = []
    while (labels < 0).any():
        b = ctx.element(int(np.flatnonzero(labels < 0)[0]))
        members = np.flatnonzero(labels >= 0)
        image = right_mult_perm(ctx, b)[members]
        if (labels[image] >= 0).any():
            raise ArithmeticError("G/G2 is not elementary abelian")
        labels[image] = labels[members] | (1 << len(basis))
        basis.append(b)
    return FrattiniData(phi, labels, basis, len(basis))


def index2_subgroups(ctx: QuotientContext) -> list[Index2Subgroup]:
    """Kernels of the nonzero functionals G/[G,G]G^2 -> F2."""
    fr = frattini_quotient(ctx)
    out = []
    for f in range(1, 1 << fr.rank):
        parity = np.zeros(ctx.order, dtype=np.int64)
        x = fr.labels & f
        while x.any():
            parity ^= x & 1
            x = x >> 1
        out.append(Index2Subgroup(f, parity == 0))
    return out
