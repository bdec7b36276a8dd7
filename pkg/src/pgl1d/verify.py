"""Verification suites: named lists of checks, each tagged with the statement it tests."""

from __future__ import annotations

import random
import time
from typing import Callable

import numpy as np

from .algebra import (
    AlgebraConfig,
    AlgebraElement,
    d_mul,
    lie_bracket,
    reduced_norm,
    reduced_trace,
)
from .census import (
    conjugacy_partition,
    centralizer,
    layer_bucket,
    order4_real_scan,
    parity_and_bound_checks,
    quotient_monotonicity,
    real_class_count,
    times_layer,
)
from .checks import Check
from .padic import f8_artin_schreier_solvable, f8_power_map_bijective
from .quotient import QuotientContext
from .structure import structure_checks

ALGEBRA_SAMPLES = 1000


def random_element(rng: random.Random, config: AlgebraConfig) -> AlgebraElement:
    mod = 1 << config.precision
    return AlgebraElement.from_coords([rng.randrange(mod) for _ in range(9)], config)


# -- algebra ------------------------------------------------------------------

def algebra_suite(seed: int = 0, samples: int = ALGEBRA_SAMPLES, precision: int = 6) -> list[Check]:
    checks = []
    for r in (1, 2):
        cfg = AlgebraConfig(r, precision)
        rng = random.Random(seed * 7919 + r)
        fails = dict(nrd=0, trd=0, bracket=0, assoc=0)
        for _ in range(samples):
            x, y, z = (random_element(rng, cfg) for _ in range(3))
            xy = d_mul(x, y)
            fails["nrd"] += reduced_norm(xy) != reduced_norm(x) * reduced_norm(y)
            fails["trd"] += reduced_trace(xy) != reduced_trace(d_mul(y, x))
            fails["bracket"] += reduced_trace(lie_bracket(x, y)) != 0
            fails["assoc"] += d_mul(xy, z) != d_mul(x, d_mul(y, z))
        tag = f"r={r}, N={precision}, {samples} samples, seed {seed}"
        checks += [
            Check("Nrd(xy) = Nrd(x) Nrd(y)", not fails["nrd"], f"{tag}, {fails['nrd']} failures",
                  "Nrd is multiplicative"),
            Check("trd(xy) = trd(yx)", not fails["trd"], f"{tag}, {fails['trd']} failures", "trd(xy) = trd(yx)"),
            Check("trd([x, y]) = 0", not fails["bracket"], f"{tag}, {fails['bracket']} failures",
                  "[D, D] <= sl_1(D)"),
            Check("(xy)z = x(yz)", not fails["assoc"], f"{tag}, {fails['assoc']} failures", "D associative"),
        ]
        pi = AlgebraElement.pi(cfg)
        checks.append(Check("Nrd(pi) = 2, trd(pi) = 0", reduced_norm(pi) == 2 and reduced_trace(pi) == 0,
                            f"r={r}: Nrd={int(reduced_norm(pi))}, trd={int(reduced_trace(pi))}", "pi^3 = 2"))
    return checks


# -- F8 oracles -----------------------------------------------------------------

def oracle_f8_suite() -> list[Check]:
    checks = []
    for i in range(1, 10):
        bij = f8_power_map_bijective(i)
        checks.append(Check(f"b -> b^(4^{i}-1) bijective on F8* iff {i} != 0 mod 3", bij == (i % 3 != 0),
                            f"bijective={bij}", "b^(2^2i - 1) bijective for i != 0 mod 3"))
    for i in range(1, 10):
        solv = f8_artin_schreier_solvable(i)
        checks.append(Check(f"b^(4^{i}) - b = 1 has no solution in F8", not solv, f"solvable={solv}",
                            "b^(2^2i) - b = 1 unsolvable"))
    return checks


# -- structure of PGL1(D) ------------------------------------------------------

def prop_pgl1d_suite(r_param: int = 1) -> list[Check]:
    anchors = {
        "pi has": "pi^3 = 2 central",
        "w has": "U0/U1 = F8^*",
        "|U_i": "|U_i/U_i+1| in {4, 8}",
        "the ": "U1 finitely generated",
        "[U_i": "[U_i, U_j] <= U_i+j",
        "squaring": "U_i^2 = U_i+3",
    }
    checks = []
    for k in (6, 8):
        for c in structure_checks(QuotientContext(k, r_param)).checks:
            c.anchor = next(v for key, v in anchors.items() if c.name.startswith(key))
            c.name = f"k={k}: {c.name}"
            checks.append(c)
    return checks


# -- the depth claims -----------------------------------------------------------

def layer_elements(ctx: QuotientContext, i: int) -> np.ndarray:
    """Codes of (U_i minus U_i+1)/U_k."""
    return np.arange(ctx.subquotient_size(i + 1), ctx.subquotient_size(i), dtype=np.int64)


def centralizer_product_claim(ctx: QuotientContext, samples: int = 64, seed: int = 0) -> Check:
    """C_U1(xU3) = C_U1(x)U2 for x in U1 minus U2, by double inclusion.

    C_U1(x) is taken modulo U_k, which contains the true centraliser.
    """
    rng = np.random.default_rng(seed)
    xs = rng.choice(layer_elements(ctx, 1), size=samples, replace=False)
    bad = []
    for x in xs.tolist():
        g = ctx.element(x)
        mod3 = centralizer(g, 1, 3, ctx)
        prod = times_layer(centralizer(g, 1, ctx.k, ctx), 2, ctx)
        if not np.array_equal(mod3, prod):
            bad.append(x)
    return Check(f"C_U1(xU3) = C_U1(x)U2 in U1/U{ctx.k}", not bad,
                 f"{samples} x in U1 - U2, {len(bad)} failures", "C_Uj(xU_i+j+1) = C_Uj(x)U_j+1")


def _index_times_layer(ctx: QuotientContext, x: int, m: int) -> tuple[bool, int]:
    """(U_m <= C_U1(x), |U1 : C_U1(x)U_m|) in U1/U_k.

    Once U_m centralises x, membership in C is a property of U_m-cosets,
    so it is enough to test one representative per coset of U1/U_m.
    """
    inner = np.arange(ctx.subquotient_size(m), dtype=np.int64)
    xi = np.full(inner.size, x, dtype=np.int64)
    contained = bool(np.array_equal(ctx.mul_codes(xi, inner), ctx.mul_codes(inner, xi)))
    sh = ctx.shift_to(m)
    reps = np.arange(ctx.order >> sh, dtype=np.int64) << sh
    xr = np.full(reps.size, x, dtype=np.int64)
    n_cent = int((ctx.mul_codes(xr, reps) == ctx.mul_codes(reps, xr)).sum())
    return contained, reps.size // n_cent


def layer_census_claim(i: int, r_param: int = 1) -> list[Check]:
    """r_U1(U_i/U_i+3) = 25 with 14/7/4 by layer, plus the centraliser indices."""
    k = i + 3
    ctx = QuotientContext(k, r_param)
    t0 = time.perf_counter()
    part = conjugacy_partition(ctx.subquotient_size(i), ctx.acting_generators, ctx)
    rc = real_class_count(part)
    elapsed = time.perf_counter() - t0
    want = {i: 14, i + 1: 7, i + 2: 4}
    checks = [Check(f"r_U1(U{i}/U{k}) = 25 with 14/7/4 by layer",
                    rc.r_count == 25 and rc.k_count == 25 and rc.by_layer == want,
                    f"{rc.k_count} classes, {rc.r_count} real, by layer {rc.by_layer}, {elapsed:.1f}s",
                    "r_U1(U_i/U_i+3) = 25, i = 1 mod 3")]
    buckets = layer_bucket(part.rep_layers, k)
    for layer, m, want_idx in ((i, 3, 16), (i + 1, 2, 4)):
        reps = part.reps[buckets == layer].tolist()
        results = [_index_times_layer(ctx, x, m) for x in reps]
        ok = all(c for c, _ in results) and all(idx == want_idx for _, idx in results)
        indices = sorted({idx for _, idx in results})
        checks.append(Check(f"|U1 : C_U1(x)U{m}| = {want_idx} for x in U{layer} - U{layer + 1} mod U{k}", ok,
                            f"{len(reps)} class reps, U{m} centralises x mod U{k}: {all(c for c, _ in results)}, "
                            f"indices {indices}",
                            f"|U1 : C_U1(x)U_{m}| = 2^{want_idx.bit_length() - 1}"))
    return checks


def order4_claim(k: int, r_param: int = 1) -> Check:
    t0 = time.perf_counter()
    scan = order4_real_scan(QuotientContext(k, r_param))
    return Check(f"no real elements of order 4 in U1/U{k}", scan.empty,
                 f"{scan.candidates} order-4 candidates in U3, {len(scan.real_reps)} real classes, "
                 f"layer-1/2 orders >= {scan.low_layer_min_order}, {time.perf_counter() - t0:.1f}s",
                 "no real order-4 elements in U1/U_i+4, i >= 6")


def claims_suite(r_param: int = 1) -> list[Check]:
    checks = [centralizer_product_claim(QuotientContext(7, r_param))]
    checks += layer_census_claim(4, r_param)
    checks += layer_census_claim(7, r_param)
    checks += [order4_claim(10, r_param), order4_claim(11, r_param)]
    return checks


# -- finite-group lemmas ---------------------------------------------------------

def parity_suite(r_param: int = 1) -> list[Check]:
    report = parity_and_bound_checks(QuotientContext(5, r_param))
    checks = []
    for c in report.checks:
        if "mod 2" in c.name and c.name.startswith("k("):
            c.anchor = "k(H) = k_G(G - H) mod 2" if "H_" in c.name else "k(G) = r(G) mod 2"
        elif "<=" in c.name:
            c.anchor = "r_G(G - H) <= r(H)"
        checks.append(c)
    checks.append(Check("Frattini rank of U1/U5", True, f"{report.frattini_rank}"))
    for c in quotient_monotonicity(4, 7, r_param):
        c.anchor = "k(G) = r(G) mod 2" if "mod 2" in c.name else "r(G/N) <= r(G)"
        checks.append(c)
    return checks


SUITES: dict[str, Callable[..., list[Check]]] = {
    "algebra": lambda seed=0, r_param=1: algebra_suite(seed),
    "prop-pgl1d": lambda seed=0, r_param=1: prop_pgl1d_suite(r_param),
    "claims-s8": lambda seed=0, r_param=1: claims_suite(r_param),
    "parity-s2": lambda seed=0, r_param=1: parity_suite(r_param),
    "oracle-f8": lambda seed=0, r_param=1: oracle_f8_suite(),
}


def run_suite(name: str, seed: int = 0, r_param: int = 1) -> list[Check]:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    return suite(seed=seed, r_param=r_param)
