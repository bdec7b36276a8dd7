"""Conjugacy classes and real classes of the quotients U1/Uk."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .checks import Check
from .quotient import (
    CosetElement,
    InfeasibleError,
    QuotientContext,
    index2_subgroups,
    layer_of,
    subgroup_generators,
)

MAX_EXHAUSTIVE_K = 10
BFS_LIMIT = 1 << 16
MAX_SCAN_ELEMENTS = 1 << 24
BYTES_PER_ELEMENT = 8 * 6  # labels, indices and temporaries, per element


class InvariantError(AssertionError):
    """A group-theoretic identity failed; points at an arithmetic bug."""


class FastModeInconclusive(RuntimeError):
    """Real elements of order 4 exist, so the layer census does not give r(G)."""


@dataclass
class ClassPartition:
    """Partition of a conjugation-closed set of codes into orbits.

    ``codes`` is sorted, ``class_id[n]`` is the class of ``codes[n]``; classes are
    numbered in order of their representative, which is the smallest code in
    the orbit.
    """

    k: int
    codes: np.ndarray = field(repr=False)
    class_id: np.ndarray = field(repr=False)
    reps: np.ndarray = field(repr=False)
    sizes: np.ndarray = field(repr=False)
    real_flags: np.ndarray = field(repr=False)
    rep_layers: np.ndarray = field(repr=False)

    @property
    def num_classes(self) -> int:
        return int(self.reps.size)

    @property
    def num_real(self) -> int:
        return int(self.real_flags.sum())

    def same_as(self, other: ClassPartition) -> bool:
        return (np.array_equal(self.codes, other.codes)
                and np.array_equal(self.class_id, other.class_id)
                and np.array_equal(self.real_flags, other.real_flags))

    def class_of(self, code: int) -> int:
        idx = int(np.searchsorted(self.codes, code))
        if idx >= self.codes.size or self.codes[idx] != code:
            raise KeyError(code)
        return int(self.class_id[idx])


def _normalise_target(target) -> np.ndarray:
    if isinstance(target, (int, np.integer)):
        return np.arange(int(target), dtype=np.int64)
    if hasattr(target, "codes"):
        return np.asarray(target.codes(), dtype=np.int64)
    codes = np.asarray([t.code if isinstance(t, CosetElement) else t for t in target], dtype=np.int64)
    return np.unique(codes)


class _Indexer:
    def __init__(self, codes: np.ndarray):
        self.codes = codes
        self.prefix = codes.size > 0 and codes[0] == 0 and codes[-1] == codes.size - 1

    def lookup(self, img: np.ndarray, strict: bool = True) -> np.ndarray:
        """Dense indices of ``img``; -1 where absent unless ``strict``."""
        n = self.codes.size
        if self.prefix:
            idx = img.copy()
            bad = (img < 0) | (img >= n)
        else:
            idx = np.searchsorted(self.codes, img)
            clipped = np.minimum(idx, n - 1)
            bad = (idx >= n) | (self.codes[clipped] != img)
        if bad.any():
            if strict:
                raise ValueError(f"element {int(img[bad][0])} outside the index range of the target set")
            idx = np.where(bad, -1, idx)
        return idx


def _bfs_labels(perms: list[np.ndarray], n: int) -> np.ndarray:
    """Orbit BFS in increasing seed order; each seed is its orbit's minimum."""
    label = [-1] * n
    plist = [p.tolist() for p in perms]
    for seed in range(n):
        if label[seed] >= 0:
            continue
        label[seed] = seed
        stack = [seed]
        while stack:
            x = stack.pop()
            for p in plist:
                y = p[x]
                if label[y] < 0:
                    label[y] = seed
                    stack.append(y)
    return np.array(label, dtype=np.int64)


def _propagate_labels(perms: list[np.ndarray], n: int) -> np.ndarray:
    """Orbit minima by min-label propagation along generator edges plus pointer jumping.

    Labels only ever decrease and always name an element of the same orbit, so
    the fixed point is the orbit minimum; the result does not depend on the
    order of updates.
    """
    label = np.arange(n, dtype=np.int64)
    while True:
        before = label.copy()
        for p in perms:
            np.minimum(label, label[p], out=label)
            label[p] = np.minimum(label[p], label)
        while True:
            jumped = label[label]
            if np.array_equal(jumped, label):
                break
            label = jumped
        if np.array_equal(label, before):
            return label


def _partition_from_labels(ctx: QuotientContext, codes: np.ndarray, label: np.ndarray,
                           indexer: _Indexer | None = None) -> ClassPartition:
    rep_idx, class_id = np.unique(label, return_inverse=True)
    reps = codes[rep_idx]
    sizes = np.bincount(class_id, minlength=rep_idx.size)
    indexer = indexer or _Indexer(codes)
    inv_idx = indexer.lookup(ctx.inv_codes(reps), strict=False)
    real = np.zeros(reps.size, dtype=bool)
    present = inv_idx >= 0
    real[present] = class_id[inv_idx[present]] == np.flatnonzero(present)
    return ClassPartition(ctx.k, codes, class_id.astype(np.int32), reps, sizes, real, ctx.layers(reps))


def conjugation_perms(ctx: QuotientContext, codes: np.ndarray, acting_generators, workers: int = 1,
                      indexer: _Indexer | None = None) -> list[np.ndarray]:
    indexer = indexer or _Indexer(codes)
    return [indexer.lookup(ctx.apply_linear(ctx.conjugation_matrix(s.rep), codes, workers))
            for s in acting_generators]


def conjugacy_partition(target, acting_generators, ctx: QuotientContext, *, workers: int = 1,
                        method: str = "auto") -> ClassPartition:
    """Orbits of ``target`` under x -> s^-1 x s for s in the acting generators.

    ``target`` is an int n (the prefix range, i.e. U_i/U_k), an object with a
    ``codes()`` method, or an iterable of codes/cosets.  ``method`` is
    ``"bfs"`` (reference), ``"propagate"`` (vectorised), or ``"auto"``.
    """
    codes = _normalise_target(target)
    indexer = _Indexer(codes)
    perms = conjugation_perms(ctx, codes, acting_generators, workers, indexer)
    if method == "auto":
        method = "bfs" if codes.size <= BFS_LIMIT else "propagate"
    if method == "bfs":
        label = _bfs_labels(perms, codes.size)
    elif method == "propagate":
        label = _propagate_labels(perms, codes.size)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _partition_from_labels(ctx, codes, label, indexer)


def brute_force_partition(ctx: QuotientContext, max_k: int = 5) -> ClassPartition:
    """Classes by conjugating every element by every element (O(|G|^2) products)."""
    if ctx.k > max_k:
        raise InfeasibleError(f"pairwise conjugacy oracle limited to k <= {max_k}",
                              estimate_bytes=ctx.order * ctx.order * 8)
    n = ctx.order
    g = np.arange(n, dtype=np.int64)
    gx = ctx.decode(g)
    inv = ctx.decode(ctx.inv_codes(g))
    label = g.copy()
    block = max(1, (1 << 17) // n)
    for lo in range(0, n, block):
        xs = np.arange(lo, min(n, lo + block), dtype=np.int64)
        m = xs.size
        x_rep = np.repeat(ctx.decode(xs), n, axis=1)
        xinv_rep = np.repeat(inv[:, lo:lo + m], n, axis=1)
        g_tile = np.tile(gx, (1, m))
        conj = ctx.encode(ctx.batch.mul(ctx.batch.mul(xinv_rep, g_tile), x_rep)).reshape(m, n)
        label = np.minimum(label, conj.min(axis=0))
    return _partition_from_labels(ctx, g, label)


# -- counting ---------------------------------------------------------------

@dataclass
class RealCount:
    k_count: int
    r_count: int
    by_layer: dict[int, int]


def layer_bucket(layers: np.ndarray, k: int) -> np.ndarray:
    """Layer for reporting: the identity is grouped with U_{k-1}/U_k."""
    return np.minimum(layers, k - 1)


def real_class_count(p: ClassPartition, full_group: bool = False) -> RealCount:
    by_layer: dict[int, int] = {}
    for layer in layer_bucket(p.rep_layers[p.real_flags], p.k).tolist():
        by_layer[layer] = by_layer.get(layer, 0) + 1
    kc, rc = p.num_classes, p.num_real
    if full_group and (kc - rc) % 2:
        raise InvariantError(f"k(G) = {kc} and r(G) = {rc} have different parity")
    return RealCount(kc, rc, dict(sorted(by_layer.items())))


@dataclass
class CensusReport:
    k: int
    r_param: int
    order_log2: int
    num_classes: int | None
    num_real_classes: int
    real_by_layer: dict[int, int]
    involution_classes: int
    order4_real_count: int
    mode: str
    lift_polynomial: list[int]
    precision: int
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["real_by_layer"] = {str(k): v for k, v in self.real_by_layer.items()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> CensusReport:
        d = dict(d)
        d["real_by_layer"] = {int(k): v for k, v in d["real_by_layer"].items()}
        return cls(**d)

    def counts(self) -> dict:
        """Everything except mode and timings; equal for equal censuses."""
        d = self.to_dict()
        for key in ("timings", "mode", "num_classes"):
            d.pop(key)
        return d


def memory_estimate(ctx: QuotientContext) -> int:
    return ctx.order * (BYTES_PER_ELEMENT + 8 * len(ctx.acting_generators))


def report_from_partition(ctx: QuotientContext, part: ClassPartition, timings: dict, mode="exhaustive") -> CensusReport:
    t0 = time.perf_counter()
    rc = real_class_count(part, full_group=True)
    order_exp = ctx.order_exponents(part.reps)
    timings = dict(timings, orders=time.perf_counter() - t0)
    return CensusReport(
        k=ctx.k,
        r_param=ctx.r_param,
        order_log2=ctx.bits,
        num_classes=rc.k_count,
        num_real_classes=rc.r_count,
        real_by_layer=rc.by_layer,
        involution_classes=int((order_exp == 1).sum()),
        order4_real_count=int(part.sizes[part.real_flags & (order_exp == 2)].sum()),
        mode=mode,
        lift_polynomial=list(ctx.batch.cubic),
        precision=ctx.N,
        timings=timings,
    )


def full_partition(ctx: QuotientContext, workers: int = 1, method: str = "auto") -> ClassPartition:
    if ctx.k > MAX_EXHAUSTIVE_K:
        est = memory_estimate(ctx)
        raise InfeasibleError(f"exhaustive census of U1/U{ctx.k} (2^{ctx.bits} elements) needs about "
                              f"{est / 2**30:.1f} GiB; supported up to k = {MAX_EXHAUSTIVE_K}", est)
    return conjugacy_partition(ctx.order, ctx.acting_generators, ctx, workers=workers, method=method)


def full_census(ctx: QuotientContext, mode: str = "exhaustive", workers: int = 1) -> CensusReport:
    if mode == "fast":
        return fast_census(ctx, workers)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.perf_counter()
    part = full_partition(ctx, workers)
    return report_from_partition(ctx, part, {"partition": time.perf_counter() - t0})


# -- centralisers -----------------------------------------------------------

def centralizer(x: CosetElement, acting_layer: int, modulus_layer: int, ctx: QuotientContext) -> np.ndarray:
    """Codes of y in U_j/U_k with [x, y] in U_n (exhaustive scan)."""
    i = layer_of(x)
    j, n = acting_layer, modulus_layer
    if x.code == 0 or j < 1 or n <= i + j or n > ctx.k:
        raise ValueError(f"need nontrivial x, j >= 1 and i + j < n <= k (i={i}, j={j}, n={n}, k={ctx.k})")
    size = ctx.subquotient_size(j)
    if size > 1 << 24:
        raise InfeasibleError(f"centraliser scan over 2^{size.bit_length() - 1} elements", size * 200)
    ys = np.arange(size, dtype=np.int64)
    xs = np.full(size, x.code, dtype=np.int64)
    sh = ctx.shift_to(n)
    keep = (ctx.mul_codes(xs, ys) >> sh) == (ctx.mul_codes(ys, xs) >> sh)
    return ys[keep]


def times_layer(codes: np.ndarray, m: int, ctx: QuotientContext, within: int | None = None) -> np.ndarray:
    """Codes of C*U_m, restricted to U_within (default U_1)."""
    n = ctx.subquotient_size(within or 1)
    sh = ctx.shift_to(m)
    image = np.unique(np.asarray(codes, dtype=np.int64) >> sh)
    ys = np.arange(n, dtype=np.int64)
    return ys[np.isin(ys >> sh, image)]


# -- the order-4 scan and the fast census ----------------------------------

@dataclass
class Order4Scan:
    k: int
    candidates: int  # elements of order exactly 4 in U_3/U_k
    real_reps: list  # CosetElements representing real classes of order 4
    low_layer_min_order: int  # smallest order seen among layer-1/2 samples
    order_le2_outside_top: int  # elements of order <= 2 in U_3 but outside U_{k-3}

    @property
    def empty(self) -> bool:
        return not self.real_reps


def _low_layer_order_check(ctx: QuotientContext, samples: int = 4096, seed: int = 0) -> int:
    """Squares of layer-1/2 elements land exactly in layer 2i; returns min sampled order."""
    rng = np.random.default_rng(seed)
    lo, hi = ctx.subquotient_size(3), ctx.order
    codes = rng.integers(lo, hi, size=samples)
    layers = ctx.layers(codes)
    sq_layers = ctx.layers(ctx.square_codes(codes))
    if ctx.k > 4 and not np.array_equal(sq_layers, np.minimum(2 * layers, ctx.k)):
        raise InvariantError("squaring a layer-1/2 element did not double its layer")
    return int(2 ** ctx.order_exponents(codes).min())


def order4_real_scan(ctx: QuotientContext, workers: int = 1) -> Order4Scan:
    """Real classes of elements of order 4 in U1/Uk.

    Layers 1 and 2 are excluded by the valuation argument (their squares sit in
    layers 2 and 4, so their orders are at least 8 once k >= 8); this is
    spot-checked on a sample.  Orders in U_3/U_k are computed exhaustively and
    the order-4 elements are tested for reality under U1-conjugation.
    """
    if ctx.k < 8:
        raise ValueError("order-4 scan needs k >= 8")
    n3 = ctx.subquotient_size(3)
    if n3 > MAX_SCAN_ELEMENTS:
        est = n3 * (BYTES_PER_ELEMENT + 8 * len(ctx.acting_generators))
        raise InfeasibleError(f"order-4 scan of U3/U{ctx.k} (2^{n3.bit_length() - 1} elements) needs about "
                              f"{est / 2**30:.1f} GiB", est)
    codes = np.arange(n3, dtype=np.int64)
    order_exp = ctx.order_exponents(codes)
    low_min = _low_layer_order_check(ctx)
    if low_min < 8:
        raise InvariantError(f"a layer-1/2 element of order {low_min} was found")
    top = ctx.subquotient_size(ctx.k - 3)
    outside = int(((order_exp <= 1) & (codes >= top)).sum())
    cand = order_exp == 2
    part = conjugacy_partition(n3, ctx.acting_generators, ctx, workers=workers)
    rep_is_cand = cand[part.reps]
    real_reps = [ctx.element(c) for c in part.reps[rep_is_cand & part.real_flags].tolist()]
    return Order4Scan(ctx.k, int(cand.sum()), real_reps, low_min, outside)


def fast_census(ctx: QuotientContext, workers: int = 1) -> CensusReport:
    """r(G) from the top three layers, once the order-4 scan comes back empty.

    A real element of order 2^m >= 8 has a real power of order 4, so with no
    real elements of order 4 the real classes are exactly the classes of
    elements of order <= 2, all of which lie in the elementary abelian
    U_{k-3}/U_k.
    """
    t0 = time.perf_counter()
    scan = order4_real_scan(ctx, workers)
    t1 = time.perf_counter()
    if not scan.empty:
        raise FastModeInconclusive(f"U1/U{ctx.k} has {len(scan.real_reps)} real classes of order 4")
    if scan.order_le2_outside_top:
        raise InvariantError("elements of order <= 2 outside U_{k-3}")
    part = conjugacy_partition(ctx.subquotient_size(ctx.k - 3), ctx.acting_generators, ctx, workers=workers)
    if not part.real_flags.all():
        raise InvariantError("U_{k-3}/U_k contains a non-real class")
    rc = real_class_count(part)
    return CensusReport(
        k=ctx.k,
        r_param=ctx.r_param,
        order_log2=ctx.bits,
        num_classes=None,
        num_real_classes=rc.r_count,
        real_by_layer=rc.by_layer,
        involution_classes=rc.r_count - 1,
        order4_real_count=0,
        mode="fast",
        lift_polynomial=list(ctx.batch.cubic),
        precision=ctx.N,
        timings={"order4_scan": t1 - t0, "top_layers": time.perf_counter() - t1},
    )


# -- finite-group lemmas ------------------------------------------------------

@dataclass
class Index2Record:
    functional: int
    k_H: int
    r_H: int
    k_G_complement: int
    r_G_complement: int


@dataclass
class ParityReport:
    k: int
    k_G: int
    r_G: int
    frattini_rank: int
    records: list[Index2Record]
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def parity_and_bound_checks(ctx: QuotientContext) -> ParityReport:
    """Class-count parity and real-class bounds over every index-2 subgroup."""
    if ctx.k > 6:
        raise InfeasibleError("index-2 subgroup checks are limited to k <= 6")
    gens = ctx.acting_generators
    full = conjugacy_partition(ctx.order, gens, ctx)
    kG, rG = full.num_classes, full.num_real
    checks = [Check(f"k(G) = r(G) mod 2 for U1/U{ctx.k}", (kG - rG) % 2 == 0, f"k={kG}, r={rG}")]
    subgroups = index2_subgroups(ctx)
    records = []
    for h in subgroups:
        codes = h.codes()
        size_ok = 2 * codes.size == ctx.order
        part_h = conjugacy_partition(codes, subgroup_generators(ctx, h.mask), ctx)
        part_c = conjugacy_partition(np.flatnonzero(~h.mask), gens, ctx)
        rec = Index2Record(h.functional, part_h.num_classes, part_h.num_real, part_c.num_classes, part_c.num_real)
        records.append(rec)
        tag = f"H_{h.functional}"
        checks.append(Check(f"|G:{tag}| = 2", size_ok, f"|H|={codes.size}"))
        checks.append(Check(f"k({tag}) = k_G(G-{tag}) mod 2", (rec.k_H - rec.k_G_complement) % 2 == 0,
                            f"{rec.k_H} vs {rec.k_G_complement}"))
        checks.append(Check(f"r_G(G-{tag}) <= r({tag})", rec.r_G_complement <= rec.r_H,
                            f"{rec.r_G_complement} <= {rec.r_H}"))
    rank = (len(subgroups) + 1).bit_length() - 1
    checks.append(Check("#index-2 subgroups = 2^m - 1", len(subgroups) == (1 << rank) - 1, f"{len(subgroups)}"))
    return ParityReport(ctx.k, kG, rG, rank, records, checks)


def quotient_monotonicity(k_min: int = 4, k_max: int = 7, r_param: int = 1) -> list[Check]:
    """r(U1/Uj) <= r(U1/Uk) for k_min <= j < k <= k_max under truncation.

    Also checks that truncation maps real classes to real classes.
    """
    parts = {}
    for k in range(k_min, k_max + 1):
        ctx = QuotientContext(k, r_param)
        parts[k] = (ctx, conjugacy_partition(ctx.order, ctx.acting_generators, ctx))
    checks = []
    for k in parts:
        ctx, p = parts[k]
        checks.append(Check(f"k(G) = r(G) mod 2 for U1/U{k}", (p.num_classes - p.num_real) % 2 == 0,
                            f"k={p.num_classes}, r={p.num_real}"))
    for j in parts:
        for k in parts:
            if j >= k:
                continue
            ctx_k, pk = parts[k]
            _, pj = parts[j]
            checks.append(Check(f"r(U1/U{j}) <= r(U1/U{k})", pj.num_real <= pk.num_real, f"{pj.num_real} <= {pk.num_real}"))
            images = pk.reps[pk.real_flags] >> ctx_k.shift_to(j)
            img_classes = pj.class_id[images]
            covered = np.unique(img_classes)
            checks.append(Check(f"real classes of U1/U{k} map to real classes of U1/U{j}",
                                bool(pj.real_flags[covered].all()), f"{covered.size} image classes"))
    return checks
