"""Curve parameter sets: BN128 (alt_bn128 / BN254), BLS12-381 G1 and a small
toy curve for exhaustive checks."""
from __future__ import annotations

from .curve import AffinePoint, CurveParams
from .field import FieldParams

BN128 = CurveParams(
    name="bn128",
    field=FieldParams(21888242871839275222246405745257275088696311157297823662689037894645226208583),
    a=0,
    b=3,
    scalar_bits=254,
    order=21888242871839275222246405745257275088548364400416034343698204186575808495617,
    generator=AffinePoint(1, 2),
)

BLS12_381 = CurveParams(
    name="bls12-381",
    field=FieldParams(
        0x1A0111EA397FE69A4B1BA7B6434BACD764774B84F38512BF6730D2A0F6B0F6241EABFFFEB153FFFFB9FEFFFFFFFFAAAB
    ),
    a=0,
    b=4,
    scalar_bits=381,
    order=0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001,
    generator=AffinePoint(
        0x17F1D3A73197D7942695638C4FA9AC0FC3688C4F9774B905A14E3A3F171BAC586C55E83FF97A1AEFFB3AF00ADB22C6BB,
        0x08B3F481E3AAA0F1A09E30ED741D8AE4FCF5E095D5D00AF600DB18CB2C04B3EDD03CC744A2888AE40CAA232946C5E7E1,
    ),
)

# y^2 = x^3 + 3 over F_1009: 948 points, group Z/2 x Z/474.  The generator
# has order 474; three points have y = 0.
TOY = CurveParams(
    name="toy",
    field=FieldParams(1009),
    a=0,
    b=3,
    scalar_bits=9,
    order=474,
    generator=AffinePoint(3, 78),
)

CURVES = {c.name: c for c in (BN128, BLS12_381, TOY)}


def get_curve(name: str) -> CurveParams:
    try:
        return CURVES[name.lower().replace("_", "-")]
    except KeyError:
        raise KeyError(f"unknown curve {name!r}; choose from {', '.join(CURVES)}") from None
