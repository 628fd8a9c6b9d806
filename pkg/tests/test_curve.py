import random

import pytest
from hypothesis import given, settings, strategies as st

import oracle
from sabmsm.curve import (
    AFFINE_INFINITY,
    INFINITY,
    AffinePoint,
    CurveParams,
    EqualInputsError,
    JacobianPoint,
    OpCounters,
    OffCurveError,
    batch_to_affine,
    is_on_curve,
    jacobian_scale,
    point_add,
    point_double,
    point_negate,
    points_equal,
    scalar_mul_double_and_add,
    to_affine,
    to_jacobian,
    unified_double_add,
)
from sabmsm.curves import BLS12_381, BN128, TOY, get_curve
from sabmsm.field import FieldParams

# 2 * (1, 2) on BN128, the widely published value
BN_2G = (0x030644E72E131A029B85045B68181585D97816A916871CA8D3C208C16D87CFD3,
         0x15ED738C0E0A7C92E7845F96B2AE9C0A68A6A449E3538FC7FF3EBF7A5A18A2C4)

TOY_POINTS = oracle.toy_points()


def aff(P, curve):
    A = to_affine(P, curve)
    return None if A.is_infinity else (int(A.x), int(A.y))


def jac(Pt):
    return INFINITY if Pt is None else to_jacobian(AffinePoint(*Pt))


def test_toy_curve_structure():
    # 947 affine points plus infinity; (3, 78) has order 474
    assert len(TOY_POINTS) + 1 == 948
    assert sorted(P for P in TOY_POINTS if P[1] == 0) == [(303, 0), (314, 0), (392, 0)]
    assert TOY.order == 474 and TOY.scalar_bits == 9
    assert scalar_mul_double_and_add(474, TOY.generator, TOY)[2] == 0
    assert scalar_mul_double_and_add(237, TOY.generator, TOY)[2] != 0


def test_is_on_curve_examples():
    assert is_on_curve(AffinePoint(1, 2), BN128)
    assert not is_on_curve(AffinePoint(1, 3), BN128)
    for c in (TOY, BN128, BLS12_381):
        assert is_on_curve(AFFINE_INFINITY, c)
        assert is_on_curve(INFINITY, c)
        assert is_on_curve(c.generator, c)


def test_curve_params_validation():
    with pytest.raises(ValueError):
        CurveParams("sing", FieldParams(1009), 0, 0, 9, 1, AffinePoint(0, 0))
    with pytest.raises(OffCurveError):
        CurveParams("bad", FieldParams(1009), 0, 3, 9, 474, AffinePoint(3, 79))
    assert get_curve("bls12_381") is BLS12_381
    with pytest.raises(KeyError):
        get_curve("secp256k1")


def test_bn128_double_matches_published():
    assert aff(point_double(to_jacobian(BN128.generator), BN128), BN128) == BN_2G
    G = (1, 2)
    assert oracle.add(G, G, int(BN128.p), 0) == BN_2G


def test_group_order_real_curves():
    for c in (BN128, BLS12_381):
        assert scalar_mul_double_and_add(c.order, c.generator, c, bits=c.order.bit_length())[2] == 0
        P = scalar_mul_double_and_add(c.order - 1, c.generator, c, bits=c.order.bit_length())
        assert aff(P, c) == oracle.neg((int(c.generator.x), int(c.generator.y)), int(c.p))


def test_infinity_handling():
    c = TOY
    G = to_jacobian(c.generator)
    assert point_double(INFINITY, c) == INFINITY
    assert point_add(G, INFINITY, c) == G
    assert point_add(INFINITY, G, c) == G
    assert unified_double_add(INFINITY, INFINITY, c) == INFINITY
    odd_inf = JacobianPoint(5, 7, 0)
    assert unified_double_add(odd_inf, INFINITY, c) == INFINITY
    assert point_negate(INFINITY, c) == INFINITY
    assert point_negate(AFFINE_INFINITY, c) == AFFINE_INFINITY
    assert to_affine(INFINITY, c).is_infinity


def test_point_add_rejects_equal_inputs():
    G = to_jacobian(TOY.generator)
    with pytest.raises(EqualInputsError):
        point_add(G, jacobian_scale(G, 7, TOY), TOY)


def test_inverse_and_y_zero():
    for c in (TOY, BN128, BLS12_381):
        G = to_jacobian(c.generator)
        assert point_add(G, point_negate(G, c), c)[2] == 0
        assert unified_double_add(G, point_negate(G, c), c)[2] == 0
    for x, y in [(303, 0), (314, 0), (392, 0)]:
        P = to_jacobian(AffinePoint(x, y))
        assert unified_double_add(P, P, TOY) == INFINITY
        assert point_double(P, TOY) == INFINITY


def test_projective_scaling():
    for c in (TOY, BN128, BLS12_381):
        G = to_jacobian(c.generator)
        S = jacobian_scale(G, 5, c)
        assert S != G
        assert to_affine(S, c) == c.generator
        assert points_equal(S, G, c)
        assert unified_double_add(S, G, c, OpCounters()) is not None
        assert to_affine(unified_double_add(S, G, c), c) == to_affine(point_double(G, c), c)


def test_cost_model():
    c = BN128
    G = to_jacobian(c.generator)
    G2 = point_double(G, c)
    k = OpCounters()
    point_add(G, G2, c, k)
    assert (k.mod_muls, k.mod_sqrs, k.mul_total, k.point_adds) == (11, 5, 16, 1)
    k = OpCounters()
    point_double(G2, c, k)
    assert (k.mod_muls, k.mod_sqrs, k.mul_total, k.point_doubles) == (1, 8, 9, 1)
    for P, Q in [(G, G2), (G2, G2), (G2, point_negate(G2, c))]:
        k = OpCounters()
        unified_double_add(P, Q, c, k)
        assert k.uda_ops == 1 and k.point_ops == 1
        assert k.mul_total <= 18
    k = OpCounters()
    point_add(G, INFINITY, c, k)
    assert k.mul_total == 0 and k.point_adds == 1


def test_counters_merge():
    a = OpCounters(1, 2, 3, 4, 5, 6)
    b = OpCounters(10, 20, 30, 40, 50, 60)
    assert (a + b).as_dict() == OpCounters(11, 22, 33, 44, 55, 66).as_dict()
    assert a.charged_mod_muls() == 16 * 9


def test_toy_add_double_against_oracle():
    rng = random.Random(3)
    pts = rng.sample(TOY_POINTS, 60) + [(303, 0)]
    for P in pts:
        assert aff(point_double(jac(P), TOY), TOY) == oracle.add(P, P, 1009, 0)
        for Q in pts:
            expect = oracle.add(P, Q, 1009, 0)
            got = unified_double_add(jac(P), jac(Q), TOY)
            assert is_on_curve(got, TOY)
            assert aff(got, TOY) == expect
            if P != Q:
                assert aff(point_add(jac(P), jac(Q), TOY), TOY) == expect


def test_toy_g_plus_2g():
    G = to_jacobian(TOY.generator)
    G2 = point_double(G, TOY)
    g = (3, 78)
    assert aff(point_add(G, G2, TOY), TOY) == oracle.add(oracle.add(g, g, 1009, 0), g, 1009, 0)


def test_scalar_mul_toy_exhaustive():
    g = (3, 78)
    R = None
    for s in range(474):
        k = OpCounters()
        got = scalar_mul_double_and_add(s, TOY.generator, TOY, k)
        assert aff(got, TOY) == R
        assert k.point_doubles == 9 and k.point_adds == bin(s).count("1")
        R = oracle.add(R, g, 1009, 0)


def test_scalar_mul_bounds():
    with pytest.raises(ValueError):
        scalar_mul_double_and_add(1 << 9, TOY.generator, TOY)
    assert scalar_mul_double_and_add(0, TOY.generator, TOY) == INFINITY
    assert to_affine(scalar_mul_double_and_add(1, TOY.generator, TOY), TOY) == TOY.generator


def test_batch_to_affine():
    c = BN128
    G = to_jacobian(c.generator)
    pts = [G, INFINITY, jacobian_scale(point_double(G, c), 9, c)]
    assert batch_to_affine(pts, c) == [to_affine(P, c) for P in pts]


def _real_point(curve, h):
    return scalar_mul_double_and_add(h % (1 << curve.scalar_bits), curve.generator, curve)


@pytest.mark.parametrize("curve", [BN128, BLS12_381], ids=lambda c: c.name)
@settings(max_examples=25, deadline=None)
@given(h1=st.integers(1, 2 ** 64), h2=st.integers(1, 2 ** 64), h3=st.integers(1, 2 ** 64))
def test_group_laws_real_curves(curve, h1, h2, h3):
    P, Q, R = (_real_point(curve, h) for h in (h1, h2, h3))
    uda = lambda A, B: unified_double_add(A, B, curve)
    assert points_equal(uda(P, Q), uda(Q, P), curve)
    assert points_equal(uda(uda(P, Q), R), uda(P, uda(Q, R)), curve)
    assert points_equal(uda(P, INFINITY), P, curve)
    assert uda(P, point_negate(P, curve))[2] == 0
    S = uda(P, Q)
    assert is_on_curve(S, curve)
    # affine oracle agrees
    p = int(curve.p)
    assert aff(S, curve) == oracle.add(aff(P, curve), aff(Q, curve), p, 0)
