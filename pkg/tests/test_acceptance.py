"""Acceptance criteria 1-10.  Each test prints one PASS/FAIL line."""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from pgl1d.census import (
    brute_force_partition,
    conjugacy_partition,
    fast_census,
    order4_real_scan,
    parity_and_bound_checks,
    quotient_monotonicity,
    real_class_count,
)
from pgl1d.structure import (
    commutator_layers,
    layer_orders,
    pi_class_order,
    squaring_bijections,
    w_residue_order,
)
from pgl1d.verify import algebra_suite, oracle_f8_suite


def record(n, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n}: {title}  ({detail})"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def test_criterion_01_layer_census(ctx_of):
    ctx = ctx_of(7, 1)
    t0 = time.perf_counter()
    part = conjugacy_partition(ctx.subquotient_size(4), ctx.acting_generators, ctx, workers=1)
    rc = real_class_count(part)
    elapsed = time.perf_counter() - t0
    ok = (rc.k_count == 25 and rc.r_count == 25 and rc.by_layer == {4: 14, 5: 7, 6: 4} and elapsed < 30)
    record(1, "U4/U7 under U1: 25 classes, all real, 14/7/4", ok,
           f"{rc.k_count} classes, {rc.r_count} real, {rc.by_layer}, {elapsed:.2f}s")


def test_criterion_02_theorem_k10(census_of):
    t0 = time.perf_counter()
    _, rep = census_of(10, 1)
    ok = rep.num_real_classes == 25 and rep.order_log2 == 24
    record(2, "exhaustive census of U1/U10 gives r(G) = 25", ok,
           f"|G| = 2^{rep.order_log2}, k(G) = {rep.num_classes}, r(G) = {rep.num_real_classes}, "
           f"{time.perf_counter() - t0:.1f}s")


def test_criterion_03_fast_agrees(census_of, ctx_of):
    _, exhaustive = census_of(10, 1)
    fast = fast_census(ctx_of(10, 1))
    ok = fast.counts() == exhaustive.counts()
    record(3, "fast census at k = 10 equals exhaustive", ok,
           f"fast r = {fast.num_real_classes} {fast.real_by_layer}, exhaustive r = {exhaustive.num_real_classes}")


def test_criterion_04_no_real_order4(ctx_of):
    scans = {k: order4_real_scan(ctx_of(k, 1)) for k in (10, 11)}
    ok = all(s.empty for s in scans.values())
    record(4, "no real elements of order 4 at k = 10, 11", ok,
           ", ".join(f"k={k}: {s.candidates} candidates, {len(s.real_reps)} real" for k, s in scans.items()))


def test_criterion_05_structure(ctx_of):
    checks = [layer_orders(ctx_of(k, 1)) for k in range(4, 9)]
    checks.append(commutator_layers(ctx_of(6, 1)))  # all pairs
    checks.append(squaring_bijections(ctx_of(8, 1)))
    checks += [w_residue_order(ctx_of(8, 1).config), pi_class_order(ctx_of(8, 1).config)]
    failed = [c.line() for c in checks if not c.passed]
    record(5, "layer orders k <= 8, [U_i,U_j] <= U_i+j at k = 6, squaring at k = 8, w and pi orders",
           not failed, f"{len(checks)} checks" + (f"; {failed}" if failed else ""))


def test_criterion_06_finite_group_lemmas(census_of, ctx_of):
    t0 = time.perf_counter()
    checks = parity_and_bound_checks(ctx_of(5, 1)).checks
    checks += quotient_monotonicity(4, 7)
    elapsed = time.perf_counter() - t0
    # parity on every group computed in this run
    parity = {k: census_of(k, 1)[1] for k in range(4, 11)}
    parity_ok = all((r.num_classes - r.num_real_classes) % 2 == 0 for r in parity.values())
    failed = [c.line() for c in checks if not c.passed]
    ok = not failed and parity_ok and elapsed < 120
    record(6, "k(G) = r(G) mod 2, index-2 parity and bound at k = 5, monotonicity 4 <= j <= k <= 7", ok,
           f"{len(checks)} checks, parity on k = 4..10 {parity_ok}, {elapsed:.1f}s")


def test_criterion_07_algebra():
    checks = algebra_suite(seed=0, samples=1000, precision=6)
    failed = [c.line() for c in checks if not c.passed]
    record(7, "Nrd multiplicative, trd symmetric, trd([x,y]) = 0, associativity (1000 samples, N = 6)",
           not failed, f"{len(checks)} checks over r = 1, 2")


def test_criterion_08_f8_oracles():
    checks = oracle_f8_suite()
    failed = [c.line() for c in checks if not c.passed]
    record(8, "F8 power-map bijectivity and Artin-Schreier tables, i = 1..9", not failed, f"{len(checks)} checks")


def test_criterion_09_r_param_insensitive(census_of):
    diffs = []
    for k in (7, 10):
        a, b = census_of(k, 1)[1].counts(), census_of(k, 2)[1].counts()
        a.pop("r_param"), b.pop("r_param")
        if a != b:
            diffs.append(k)
    record(9, "censuses at k = 7, 10 agree for r_param 1 and 2", not diffs,
           f"differences at {diffs}" if diffs else "identical")


def test_criterion_10_brute_force_oracle(ctx_of):
    same = {}
    for k in range(2, 6):
        ctx = ctx_of(k, 1)
        same[k] = brute_force_partition(ctx).same_as(
            conjugacy_partition(ctx.order, ctx.acting_generators, ctx, method="bfs"))
    record(10, "pairwise-conjugacy oracle equals orbit BFS for k <= 5", all(same.values()), f"{same}")
