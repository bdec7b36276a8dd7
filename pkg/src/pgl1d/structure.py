"""Structural checks on PGL1(D) and the filtration quotients U1/Uk."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgebraConfig, AlgebraElement, d_mul
from .checks import Check
from .quotient import InfeasibleError, QuotientContext, closure_size, quotient_order_log2


@dataclass
class StructureReport:
    k: int
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def pi_class_order(config: AlgebraConfig) -> Check:
    """pi^3 = 2 is central while pi and pi^2 are not, so pi has order 3 mod Z(D*)."""
    pi = AlgebraElement.pi(config)
    w = AlgebraElement.w(config)
    cube = d_mul(d_mul(pi, pi), pi)
    central = cube == AlgebraElement.scalar(2, config)
    noncentral = all(d_mul(p, w) != d_mul(w, p) for p in (pi, d_mul(pi, pi)))
    return Check("pi has order 3 modulo Z(D*)", central and noncentral,
                 f"pi^3 == 2: {central}; pi, pi^2 non-central: {noncentral}")


def w_residue_order(config: AlgebraConfig) -> Check:
    """w generates U0/U1 = F8^*: its powers w^0..w^6 have distinct nonzero residues and w^7 = 1."""
    w = AlgebraElement.w(config)
    x = AlgebraElement.one(config)
    residues = []
    for _ in range(7):
        residues.append(x.a[0].residue().bits)
        x = d_mul(x, w)
    ok = len(set(residues)) == 7 and 0 not in residues and x == AlgebraElement.one(config)
    return Check("w has order 7 in U0/U1", ok, f"residues {residues}")


def layer_orders(ctx: QuotientContext) -> Check:
    """Count cosets by canonicalising every element of (1 + m_D)/(1 + m_D^k).

    The central factor 1 + 2Z2 (mod 2^e0) acts freely, so every coset should
    have exactly 2^(e0-1) preimages.
    """
    k = ctx.k
    if k > 8:
        raise InfeasibleError("exhaustive layer count is limited to k <= 8", 8 ** (k - 1) * 80)
    e = ctx.exps
    # mixed radix: z0 odd, z1 and z2 even (mod 2^e0), a1 and a2 free
    radices = [1 << (e[0] - 1)] * 3 + [1 << e[1]] * 3 + [1 << e[2]] * 3
    total = int(np.prod(radices))
    assert total == 8 ** (k - 1)
    idx = np.arange(total, dtype=np.int64)
    coords = np.zeros((9, total), dtype=np.int64)
    for c, rad in enumerate(radices):
        coords[c] = idx % rad
        idx //= rad
    coords[0] = 2 * coords[0] + 1
    coords[1:3] *= 2
    codes = ctx.encode(coords)
    uniq, counts = np.unique(codes, return_counts=True)
    expected = 8 ** (k - 1) // 2 ** (-(-k // 3) - 1)
    fibres_ok = bool((counts == 1 << (e[0] - 1)).all())
    layers = ctx.layers(uniq)
    in_layer = np.array([(layers >= i).sum() for i in range(1, k + 1)])
    orders = (in_layer[:-1] // in_layer[1:]).tolist()
    want = [4 if i % 3 == 0 else 8 for i in range(1, k)]
    ok = uniq.size == expected == 1 << quotient_order_log2(k) and fibres_ok and orders == want
    return Check(f"|U_i/U_i+1| = 8 or 4 (i = 0 mod 3), |U1/U{k}| = 2^{ctx.bits}", ok,
                 f"{uniq.size} cosets, layer orders {orders}")


def generator_closure(ctx: QuotientContext) -> Check:
    size = closure_size(ctx, ctx.generators)
    return Check(f"the {len(ctx.generators)} generators generate U1/U{ctx.k}", size == ctx.order,
                 f"closure {size} of {ctx.order}")


def _conjugation_matrices(ctx: QuotientContext, hs: np.ndarray) -> np.ndarray:
    """(len(hs), 9, 9) matrices of x -> h^-1 x h."""
    b = ctx.batch
    h = ctx.decode(hs)
    hinv = ctx.decode(ctx.inv_codes(hs))
    out = np.empty((hs.size, 9, 9), dtype=np.int64)
    for c in range(9):
        e = np.zeros((9, hs.size), dtype=np.int64)
        e[c] = 1
        out[:, :, c] = b.mul(b.mul(hinv, e), h).T
    return out


def commutator_layers(ctx: QuotientContext, hs: np.ndarray | None = None) -> Check:
    """[g, h] lies in U_min(i+j, k) for g in U_i, h in U_j.

    ``hs`` defaults to the whole group, which makes the check exhaustive over
    all pairs.  g^-1 h^-1 g h is in U_m exactly when h^-1 g h and g agree in
    U1/U_m.
    """
    k, n = ctx.k, ctx.order
    hs = np.arange(n, dtype=np.int64) if hs is None else np.asarray(hs, dtype=np.int64)
    g = np.arange(n, dtype=np.int64)
    x = ctx.decode(g).astype(np.float64)
    lg = ctx.layers(g)
    lh = ctx.layers(hs)
    shifts = np.array([ctx.shift_to(min(m, k)) if m >= 1 else 0 for m in range(2 * k + 1)])
    mask = ctx.batch.mask
    block = max(1, (1 << 19) // n)
    bad = 0
    first = None
    for lo in range(0, hs.size, block):
        mats = _conjugation_matrices(ctx, hs[lo:lo + block]).astype(np.float64)
        conj = np.rint(mats @ x).astype(np.int64) & mask  # (m, 9, n)
        m = conj.shape[0]
        codes = ctx.encode(conj.transpose(1, 0, 2).reshape(9, m * n)).reshape(m, n)
        sh = shifts[np.minimum(lh[lo:lo + m, None] + lg[None, :], k)]
        fail = (codes >> sh) != (g[None, :] >> sh)
        if fail.any():
            bad += int(fail.sum())
            if first is None:
                r, c = np.argwhere(fail)[0]
                first = (int(hs[lo + r]), int(g[c]))
    detail = f"{hs.size * n} pairs" + (f", {bad} failures, first (h, g) = {first}" if bad else "")
    return Check(f"[U_i, U_j] <= U_i+j in U1/U{k}", bad == 0, detail)


def squaring_bijections(ctx: QuotientContext) -> Check:
    """Squaring induces bijections U_i/U_i+1 -> U_i+3/U_i+4 for 3 < i < k - 3."""
    k = ctx.k
    span = [i for i in range(4, k - 3)]
    if not span:
        return Check(f"squaring U_i/U_i+1 -> U_i+3/U_i+4 in U1/U{k}", False, "no layer with 3 < i < k - 3")
    notes, ok = [], True
    for i in span:
        g = np.arange(ctx.subquotient_size(i), dtype=np.int64)
        sq = ctx.square_codes(g)
        inside = bool((sq < ctx.subquotient_size(i + 3)).all())
        src, dst = ctx.digit(g, i), ctx.digit(sq, i + 3)
        pairs = np.unique(np.stack([src, dst]), axis=1)
        well_defined = np.unique(pairs[0]).size == pairs.shape[1]
        bijective = np.unique(pairs[1]).size == pairs.shape[1] == 1 << ctx.width[i]
        ok &= inside and well_defined and bijective
        notes.append(f"i={i}: into U_{i + 3} {inside}, induced map well-defined {well_defined}, bijective {bijective}")
    return Check(f"squaring U_i/U_i+1 -> U_i+3/U_i+4 bijective for 3 < i < {k - 3}", ok, "; ".join(notes))


def structure_checks(ctx: QuotientContext, exhaustive_commutators: bool | None = None) -> StructureReport:
    """All structural checks that are feasible for this k.

    Commutators are checked over all pairs when k <= 6 (or when asked) and
    against the generator list otherwise.
    """
    if exhaustive_commutators is None:
        exhaustive_commutators = ctx.k <= 6
    checks = [pi_class_order(ctx.config), w_residue_order(ctx.config)]
    if ctx.k <= 8:
        checks.append(layer_orders(ctx))
        checks.append(generator_closure(ctx))
    hs = None if exhaustive_commutators else np.array([g.code for g in ctx.generators], dtype=np.int64)
    checks.append(commutator_layers(ctx, hs))
    if ctx.k >= 8:
        checks.append(squaring_bijections(ctx))
    return StructureReport(ctx.k, checks)
