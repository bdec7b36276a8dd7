import numpy as np
import pytest

from pgl1d.census import (
    CensusReport,
    ClassPartition,
    InvariantError,
    brute_force_partition,
    centralizer,
    conjugacy_partition,
    fast_census,
    full_census,
    order4_real_scan,
    real_class_count,
)
from pgl1d.quotient import InfeasibleError, layer_of


@pytest.mark.parametrize("k,r", [(4, 1), (4, 2), (5, 1), (5, 2)])
def test_brute_force_oracle(k, r, ctx_of):
    ctx = ctx_of(k, r)
    oracle = brute_force_partition(ctx)
    for method in ("bfs", "propagate"):
        assert conjugacy_partition(ctx.order, ctx.acting_generators, ctx, method=method).same_as(oracle)
    # acting by all 21 generators gives the same orbits
    assert conjugacy_partition(ctx.order, ctx.generators, ctx).same_as(oracle)


def test_brute_force_refuses_large_k(ctx_of):
    with pytest.raises(InfeasibleError):
        brute_force_partition(ctx_of(6, 1))


def test_partition_invariants(census_of):
    part, _ = census_of(7, 1)
    assert part.sizes.sum() == part.codes.size
    # reps are orbit minima and the class ids follow rep order
    assert np.array_equal(part.class_id[part.reps], np.arange(part.num_classes))
    first = np.full(part.num_classes, -1)
    first[part.class_id[::-1]] = part.codes[::-1]
    assert np.array_equal(first, part.reps)
    # sizes are powers of two dividing |G|
    assert all(s & (s - 1) == 0 for s in part.sizes.tolist())


def test_identity_partition(ctx_of):
    ctx = ctx_of(5, 1)
    p = conjugacy_partition([ctx.identity], ctx.acting_generators, ctx)
    rc = real_class_count(p)
    assert (rc.k_count, rc.r_count) == (1, 1)


def test_outside_target_rejected(ctx_of):
    ctx = ctx_of(5, 1)
    g = ctx.generators[0]
    with pytest.raises(ValueError):
        conjugacy_partition([g], ctx.acting_generators, ctx)


@pytest.mark.parametrize("k", [6, 7])
def test_schedule_independence(k, ctx_of):
    ctx = ctx_of(k, 1)
    ref = conjugacy_partition(ctx.order, ctx.acting_generators, ctx, method="bfs")
    for workers in (1, 2):
        p = conjugacy_partition(ctx.order, ctx.acting_generators, ctx, workers=workers, method="propagate")
        assert p.same_as(ref)
        assert np.array_equal(p.reps, ref.reps)


def test_parallel_large_matches(ctx_of):
    ctx = ctx_of(8, 1)
    a = conjugacy_partition(ctx.order, ctx.acting_generators, ctx, workers=1)
    b = conjugacy_partition(ctx.order, ctx.acting_generators, ctx, workers=3)
    assert a.same_as(b)


@pytest.mark.parametrize("k", [5, 7, 8])
def test_real_classes_closed_under_squaring(k, census_of, ctx_of):
    part, _ = census_of(k, 1)
    ctx = ctx_of(k, 1)
    real_reps = part.reps[part.real_flags]
    squares = ctx.square_codes(real_reps)
    assert part.real_flags[part.class_id[squares]].all()


def test_real_flag_against_scalar_conjugacy(census_of, ctx_of):
    # a class is real iff some group element conjugates the rep to its inverse
    ctx = ctx_of(5, 1)
    part, _ = census_of(5, 1)
    allc = np.arange(ctx.order, dtype=np.int64)
    for rep, real in zip(part.reps.tolist(), part.real_flags.tolist()):
        x = np.full(ctx.order, rep, dtype=np.int64)
        conj = ctx.mul_codes(ctx.mul_codes(ctx.inv_codes(allc), x), allc)
        assert real == bool((conj == ctx.inv_codes(x[:1])[0]).any())


def test_regression_counts(census_of):
    # exhaustive values, also reproduced by the pairwise oracle for k <= 5
    expect = {4: (25, 11), 5: (53, 11), 6: (109, 25), 7: (121, 25), 8: (233, 25)}
    for k, (kc, rc) in expect.items():
        _, rep = census_of(k, 1)
        assert (rep.num_classes, rep.num_real_classes) == (kc, rc)
        assert (kc - rc) % 2 == 0


def test_parity_violation_is_fatal(ctx_of):
    ctx = ctx_of(4, 1)
    p = ClassPartition(4, np.arange(2), np.array([0, 1], dtype=np.int32), np.array([0, 1]), np.array([1, 1]),
                       np.array([True, False]), np.array([4, 3]))
    with pytest.raises(InvariantError):
        real_class_count(p, full_group=True)
    assert real_class_count(p).r_count == 1


def test_report_roundtrip(census_of):
    _, rep = census_of(6, 1)
    again = CensusReport.from_dict(rep.to_dict())
    assert again == rep
    assert again.counts() == rep.counts()
    assert "timings" not in rep.counts()


def test_full_census_refuses_k11(ctx_of):
    with pytest.raises(InfeasibleError) as err:
        full_census(ctx_of(11, 1))
    assert err.value.estimate_bytes > 0


def test_centralizer_central_element(ctx_of):
    ctx = ctx_of(7, 1)
    z = ctx.element(1)  # bottom layer, central
    assert layer_of(z) == 6
    with pytest.raises(ValueError):
        centralizer(z, 1, 7, ctx)  # needs n > i + j
    x = ctx.element(ctx.subquotient_size(6))  # a layer-5 element
    assert layer_of(x) == 5
    cent = centralizer(x, 1, 7, ctx)
    # x in U5 commutes with U2 modulo U7
    assert np.isin(np.arange(ctx.subquotient_size(2)), cent).all()


def test_centralizer_claim_instance(ctx_of):
    # C_U1(xU3) = C_U1(x)U2 for a layer-1 x, by double inclusion
    from pgl1d.census import times_layer
    ctx = ctx_of(7, 1)
    for x in ctx.generators[:7]:
        left = centralizer(x, 1, 3, ctx)
        right = times_layer(centralizer(x, 1, 7, ctx), 2, ctx)
        assert set(left.tolist()) == set(right.tolist())
        assert left.size * 4 == ctx.order  # index |U1/U2| / 2 = 4


def test_order4_candidates_k10(ctx_of):
    ctx = ctx_of(10, 1)
    scan = order4_real_scan(ctx)
    assert scan.candidates == ctx.subquotient_size(4) - ctx.subquotient_size(7)
    assert scan.empty
    assert scan.order_le2_outside_top == 0


def test_order4_scan_needs_k8(ctx_of):
    with pytest.raises(ValueError):
        order4_real_scan(ctx_of(7, 1))


def test_fast_census_k8_matches_exhaustive(census_of, ctx_of):
    _, rep = census_of(8, 1)
    fast = fast_census(ctx_of(8, 1))
    assert fast.counts() == rep.counts()
    assert fast.num_classes is None and fast.mode == "fast"


def test_involutions_live_in_top_layers(census_of, ctx_of):
    # real classes = identity + involution classes, all inside U_{k-3}
    k = 10
    part, rep = census_of(k, 1)
    ctx = ctx_of(k, 1)
    real = part.reps[part.real_flags]
    exps = ctx.order_exponents(real)
    assert exps.max() == 1
    assert (real < ctx.subquotient_size(k - 3)).all()
    assert rep.involution_classes == rep.num_real_classes - 1
