import random

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from sabmsm.curve import (
    INFINITY,
    AffinePoint,
    OffCurveError,
    OpCounters,
    point_double,
    scalar_mul_double_and_add,
    to_affine,
    to_jacobian,
    unified_double_add,
)
from sabmsm.curves import BLS12_381, BN128, TOY
from sabmsm.msm import (
    RECURSIVE,
    RUNNING_SUM,
    BucketArray,
    MsmConfig,
    WindowResult,
    bucket_accumulate,
    bucket_reduce_double_and_add,
    bucket_reduce_recursive,
    bucket_reduce_running_sum,
    combine_windows,
    fill_ops_per_point,
    msm_naive,
    msm_pippenger,
    recursive_reduce_op_count,
    running_sum_op_count,
    slice_scalars,
    window_count,
)
from sabmsm.vectors import generate_vectors

TOY_POINTS = oracle.toy_points()
P_TOY = 1009

# [DERIVED] sum s_i P_i from the affine oracle over generate_vectors(curve, m, seed)
FROZEN = {
    ("toy", 5, 0): (0x35C, 0x385),
    ("bn128", 3, 7): (0xAFC79D9A12D5BA23C4F5E4CDCF732C0B622595B21B6FC6E11AB15DDB820F57A,
                      0x1C5F1EA06E383414748FA672CD2D17DF5CAFBC92EB7DA1E1F5F3ED76831A15E2),
    ("bls12-381", 3, 7): (
        0x906817CAF278805842F8BE16063FE6F56B4980937116C589C50279E4FF837306A298F1A813FC2DF2E8E1DDE01E4BB15,
        0xB6D9542E6FE7D03B74D5088A456A6DFB4528A58646EF21B83BB2EBDD2092D15278BF3A84845CA69485F086898620E76),
}
CURVE_BY_NAME = {"toy": TOY, "bn128": BN128, "bls12-381": BLS12_381}


def aff(P, curve):
    A = to_affine(P, curve)
    return None if A.is_infinity else (int(A.x), int(A.y))


def jac(Pt):
    return INFINITY if Pt is None else to_jacobian(AffinePoint(*Pt))


def toy_mul(s, P):
    return oracle.mul(s, P, P_TOY, 0)


def test_config_validation():
    assert MsmConfig().window_bits == 12
    assert MsmConfig(combine_strategy="running-sum").combine_strategy == RUNNING_SUM
    for bad in (dict(window_bits=0), dict(window_bits=21), dict(inner_window_bits=13),
                dict(combine_strategy="x"), dict(parallelism_hint=0)):
        with pytest.raises(ValueError):
            MsmConfig(**bad)


def test_slicing_examples():
    assert slice_scalars([0xB3], 8, 4).slices == [[3], [11]]
    assert slice_scalars([0], 254, 12).slices == [[0]] * 22
    assert window_count(254, 12) == 22 and window_count(381, 12) == 32
    sl = slice_scalars([0b1_0000_0001], 9, 4)
    assert sl.window_count == 3 and sl.slices == [[1], [0], [1]]
    with pytest.raises(ValueError):
        slice_scalars([1 << 9], 9, 4)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 2 ** 381 - 1), min_size=1, max_size=8), st.integers(1, 20))
def test_recomposition(scalars, k):
    assert slice_scalars(scalars, 381, k).recompose() == scalars


def test_bucket_array():
    B = BucketArray(3)
    assert len(B) == 8 and all(b == INFINITY for b in B.buckets)
    with pytest.raises(IndexError):
        B[0] = to_jacobian(TOY.generator)


def test_accumulate_example():
    P1, P2, P3 = TOY_POINTS[10], TOY_POINTS[20], TOY_POINTS[30]
    c = OpCounters()
    B = bucket_accumulate([1, 3, 1], [jac(P1), jac(P2), jac(P3)], TOY, c, k=2)
    assert aff(B[1], TOY) == oracle.add(P1, P3, P_TOY, 0)
    assert B[2] == INFINITY
    assert aff(B[3], TOY) == P2
    assert c.uda_ops == 3
    c = OpCounters()
    B = bucket_accumulate([0, 0], [jac(P1), jac(P2)], TOY, c, k=2)
    assert all(b == INFINITY for b in B.buckets) and c.uda_ops == 0
    with pytest.raises(ValueError):
        bucket_accumulate([4], [jac(P1)], TOY, k=2)


def test_accumulate_then_reduce_is_msm():
    rng = random.Random(11)
    pts = rng.sample(TOY_POINTS, 50)
    digits = [rng.randrange(16) for _ in pts]
    B = bucket_accumulate(digits, [jac(P) for P in pts], TOY, k=4)
    assert aff(bucket_reduce_running_sum(B, TOY), TOY) == oracle.msm(digits, pts, P_TOY, 0)


def test_running_sum_examples():
    P, Q = TOY_POINTS[5], TOY_POINTS[6]
    B = BucketArray(2)
    B[1], B[3] = jac(P), jac(Q)
    assert aff(bucket_reduce_running_sum(B, TOY), TOY) == oracle.add(P, toy_mul(3, Q), P_TOY, 0)
    c = OpCounters()
    assert bucket_reduce_running_sum(BucketArray(5), TOY, c) == INFINITY
    assert c.point_ops == running_sum_op_count(5) == 61


def random_buckets(rng, k):
    B = BucketArray(k)
    pts = {}
    for d in range(1, 1 << k):
        if rng.random() < 0.8:
            pts[d] = rng.choice(TOY_POINTS)
            B[d] = jac(pts[d])
    return B, pts


@pytest.mark.parametrize("k,k_inner", [(1, 1), (2, 1), (4, 2), (5, 2), (6, 3), (6, 6)])
def test_reductions_agree(k, k_inner):
    rng = random.Random(k * 10 + k_inner)
    B, pts = random_buckets(rng, k)
    expect = None
    for d, P in pts.items():
        expect = oracle.add(expect, toy_mul(d, P), P_TOY, 0)
    c1, c2 = OpCounters(), OpCounters()
    assert aff(bucket_reduce_running_sum(B, TOY, c1), TOY) == expect
    assert aff(bucket_reduce_recursive(B, k_inner, TOY, c2), TOY) == expect
    assert aff(bucket_reduce_double_and_add(B, TOY), TOY) == expect
    assert c1.point_ops == running_sum_op_count(k)
    assert c2.point_ops == recursive_reduce_op_count(k, k_inner)


def test_recursive_empty_buckets_and_counts():
    c = OpCounters()
    assert bucket_reduce_recursive(BucketArray(8), 4, TOY, c) == INFINITY
    # the count does not depend on the bucket contents
    assert c.point_ops == recursive_reduce_op_count(8, 4)
    # k=12, k'=4: 3 inner windows, 3840 non-zero digits each, 29 running-sum
    # ops each, 10 combine ops
    assert recursive_reduce_op_count(12, 4) == 3 * 3840 + 3 * 29 + 10 == 11617
    assert running_sum_op_count(12) == 8189
    with pytest.raises(ValueError):
        bucket_reduce_recursive(BucketArray(4), 5, TOY)


def test_recursive_bn128_k12():
    rng = random.Random(5)
    G = to_jacobian(BN128.generator)
    B = BucketArray(12)
    base = G
    for d in rng.sample(range(1, 4096), 40):
        B[d] = base
        base = unified_double_add(base, G, BN128)
    assert aff(bucket_reduce_recursive(B, 4, BN128), BN128) == aff(bucket_reduce_running_sum(B, BN128), BN128)


def test_combine_windows():
    P, Q = TOY_POINTS[100], TOY_POINTS[200]
    c = OpCounters()
    r = combine_windows([WindowResult(0, jac(P)), WindowResult(1, jac(Q))], 4, TOY, c)
    assert aff(r, TOY) == oracle.add(toy_mul(16, Q), P, P_TOY, 0)
    assert (c.point_doubles, c.point_adds) == (4, 1)
    assert combine_windows([WindowResult(j, INFINITY) for j in range(3)], 3, TOY) == INFINITY
    rng = random.Random(2)
    R = [rng.choice(TOY_POINTS) for _ in range(3)]
    expect = None
    for j, Rj in enumerate(R):
        expect = oracle.add(expect, toy_mul(8 ** j, Rj), P_TOY, 0)
    shuffled = [WindowResult(j, jac(R[j])) for j in (2, 0, 1)]
    assert aff(combine_windows(shuffled, 3, TOY), TOY) == expect
    with pytest.raises(ValueError):
        combine_windows([WindowResult(0, jac(P)), WindowResult(2, jac(Q))], 3, TOY)
    with pytest.raises(ValueError):
        combine_windows([WindowResult(0, jac(P)), WindowResult(0, jac(Q))], 3, TOY)


def test_naive_examples():
    G = TOY.generator
    assert to_affine(msm_naive([1], [G], TOY), TOY) == G
    assert msm_naive([0, 0], [G, G], TOY) == INFINITY
    pts = TOY_POINTS[1:4]
    assert aff(msm_naive([2, 3, 5], [AffinePoint(*P) for P in pts], TOY), TOY) == \
        oracle.msm([2, 3, 5], pts, P_TOY, 0)
    with pytest.raises(ValueError):
        msm_naive([1, 2], [G], TOY)
    with pytest.raises(ValueError):
        msm_naive([], [], TOY)
    with pytest.raises(ValueError):
        msm_naive([1 << 9], [G], TOY)
    with pytest.raises(OffCurveError):
        msm_naive([1], [AffinePoint(3, 79)], TOY)


@pytest.mark.parametrize("key", sorted(FROZEN))
def test_frozen_results(key):
    name, m, seed = key
    curve = CURVE_BY_NAME[name]
    vs = generate_vectors(curve, m, seed)
    assert aff(msm_naive(vs.scalars, vs.points, curve), curve) == FROZEN[key]
    for strategy in (RUNNING_SUM, RECURSIVE):
        for k in (4, 12):
            cfg = MsmConfig(k, strategy, inner_window_bits=min(4, k) // 2 or 1)
            assert aff(msm_pippenger(vs.scalars, vs.points, curve, cfg), curve) == FROZEN[key]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 511), st.sampled_from(TOY_POINTS)), min_size=1, max_size=12),
       st.integers(1, 9), st.sampled_from([RUNNING_SUM, RECURSIVE]))
def test_pippenger_matches_oracle_toy(pairs, k, strategy):
    scalars = [s for s, _ in pairs]
    pts = [P for _, P in pairs]
    cfg = MsmConfig(k, strategy, inner_window_bits=max(1, k // 2))
    got = msm_pippenger(scalars, [AffinePoint(*P) for P in pts], TOY, cfg)
    assert aff(got, TOY) == oracle.msm(scalars, pts, P_TOY, 0)


def test_phase_counters_and_parallel():
    vs = generate_vectors(BN128, 64, 3)
    phases = {}
    total = OpCounters()
    cfg = MsmConfig(8, RECURSIVE, 4)
    r1 = msm_pippenger(vs.scalars, vs.points, BN128, cfg, total, phases)
    p = window_count(254, 8)
    nonzero = sum(1 for digits in slice_scalars(vs.scalars, 254, 8).slices for d in digits if d)
    assert phases["fill"].uda_ops == nonzero
    assert phases["reduce"].point_ops == p * recursive_reduce_op_count(8, 4)
    assert phases["combine"].point_ops == 9 * (p - 1)
    assert total.point_ops == sum(ph.point_ops for ph in phases.values())
    assert fill_ops_per_point(phases, 64) == nonzero / 64
    phases2, total2 = {}, OpCounters()
    r2 = msm_pippenger(vs.scalars, vs.points, BN128, MsmConfig(8, RECURSIVE, 4, parallelism_hint=2),
                       total2, phases2)
    assert r1 == r2
    assert total.as_dict() == total2.as_dict()


def test_pippenger_fewer_mul_than_naive():
    vs = generate_vectors(BN128, 256, 1)
    a, b = OpCounters(), OpCounters()
    msm_naive(vs.scalars, vs.points, BN128, a)
    msm_pippenger(vs.scalars, vs.points, BN128, MsmConfig(8), b)
    assert b.mul_total < a.mul_total
