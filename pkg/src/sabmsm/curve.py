"""Short-Weierstrass group law in Jacobian coordinates.

Coordinates are plain residues (``gmpy2.mpz``) in ``[0, p)``; ``(X, Y, Z)``
stands for the affine point ``(X/Z^2, Y/Z^3)`` and any ``Z == 0`` is the
point at infinity, normalised to ``(1, 1, 0)`` on output.

Every operation takes a caller-owned :class:`OpCounters` and charges it with
the field work actually performed.  Generic costs:

=====================  ========  ========
operation              mul       sqr
=====================  ========  ========
``point_add``          11        5
``point_double``       1         8
``unified_double_add`` <= 16 (add and double branches share the pre-join)
=====================  ========  ========

Shortcuts involving the point at infinity cost no field work but are still
counted as one point operation.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from typing import NamedTuple, Optional, Union

import gmpy2
from gmpy2 import mpz

from .field import FieldParams

# Field work charged for one generic operation.
ADD_MULS, ADD_SQRS, ADD_LINEAR = 11, 5, 13
DBL_MULS, DBL_SQRS, DBL_LINEAR = 1, 8, 11
UDA_PREJOIN_MULS, UDA_PREJOIN_SQRS = 6, 2
# Hardware multiplier instances in the fused pipeline: an upper bound on what
# a single UDA invocation may be charged.
UDA_MULTIPLIER_INSTANCES = 18
# Flat per-operation charge used for double-and-add accounting tables.
TABLE_CHARGE_PER_POINT_OP = 16


class EqualInputsError(ValueError):
    """``point_add`` was handed two equal points; use doubling instead."""


class OffCurveError(ValueError):
    pass


@dataclass
class OpCounters:
    mod_muls: int = 0
    mod_sqrs: int = 0
    mod_adds: int = 0
    point_adds: int = 0
    point_doubles: int = 0
    uda_ops: int = 0

    @property
    def point_ops(self) -> int:
        return self.point_adds + self.point_doubles

    @property
    def mul_total(self) -> int:
        """Multiplications and squarings together."""
        return self.mod_muls + self.mod_sqrs

    def charged_mod_muls(self, per_op: int = TABLE_CHARGE_PER_POINT_OP) -> int:
        """Table-style accounting: every point operation charged ``per_op``."""
        return per_op * self.point_ops

    def merge(self, other: "OpCounters") -> "OpCounters":
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def __add__(self, other: "OpCounters") -> "OpCounters":
        return OpCounters().merge(self).merge(other)

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class AffinePoint(NamedTuple):
    x: int = 0
    y: int = 0
    is_infinity: bool = False


class JacobianPoint(NamedTuple):
    X: int
    Y: int
    Z: int


AFFINE_INFINITY = AffinePoint(0, 0, True)
INFINITY = JacobianPoint(mpz(1), mpz(1), mpz(0))

Point = Union[AffinePoint, JacobianPoint]


@dataclass(frozen=True)
class CurveParams:
    name: str
    field: FieldParams
    a: int
    b: int
    scalar_bits: int
    order: int
    generator: AffinePoint

    def __post_init__(self):
        p = self.field.modulus
        object.__setattr__(self, "a", mpz(self.a % p))
        object.__setattr__(self, "b", mpz(self.b % p))
        g = self.generator
        object.__setattr__(self, "generator", AffinePoint(mpz(g.x), mpz(g.y), g.is_infinity))
        if (4 * self.a ** 3 + 27 * self.b ** 2) % p == 0:
            raise ValueError(f"{self.name}: singular curve")
        object.__setattr__(self, "_p", mpz(p))
        if not is_on_curve(self.generator, self):
            raise OffCurveError(f"{self.name}: generator not on curve")

    @property
    def p(self) -> int:
        return self._p


def _counters(counters: Optional[OpCounters]) -> OpCounters:
    return counters if counters is not None else OpCounters()


def is_infinity(P: Point) -> bool:
    if isinstance(P, AffinePoint):
        return P.is_infinity
    return P[2] == 0


def is_on_curve(P: Point, curve: CurveParams) -> bool:
    p = curve.p
    if isinstance(P, AffinePoint):
        if P.is_infinity:
            return True
        x, y = P.x, P.y
        if not (0 <= x < p and 0 <= y < p):
            return False
        return (y * y - (x * x * x + curve.a * x + curve.b)) % p == 0
    X, Y, Z = P
    if Z % p == 0:
        return True
    # Y^2 = X^3 + a X Z^4 + b Z^6
    Z2 = Z * Z % p
    Z4 = Z2 * Z2 % p
    return (Y * Y - X * X * X - curve.a * X * Z4 - curve.b * Z4 * Z2) % p == 0


def to_jacobian(P: AffinePoint) -> JacobianPoint:
    if P.is_infinity:
        return INFINITY
    return JacobianPoint(mpz(P.x), mpz(P.y), mpz(1))


def to_affine(P: JacobianPoint, curve: CurveParams) -> AffinePoint:
    X, Y, Z = P
    p = curve.p
    if Z % p == 0:
        return AFFINE_INFINITY
    zi = gmpy2.invert(Z, p)
    zi2 = zi * zi % p
    return AffinePoint(X * zi2 % p, Y * zi2 * zi % p, False)


def normalize(P: JacobianPoint) -> JacobianPoint:
    return INFINITY if P[2] == 0 else P


def point_negate(P: Point, curve: CurveParams) -> Point:
    p = curve.p
    if isinstance(P, AffinePoint):
        return P if P.is_infinity else AffinePoint(P.x, (-P.y) % p, False)
    if P[2] == 0:
        return INFINITY
    return JacobianPoint(P[0], (-P[1]) % p, P[2])


def points_equal(P: JacobianPoint, Q: JacobianPoint, curve: CurveParams) -> bool:
    """Group-element equality by cross-multiplication (no inversion)."""
    p = curve.p
    inf_p, inf_q = P[2] % p == 0, Q[2] % p == 0
    if inf_p or inf_q:
        return inf_p and inf_q
    Z1Z1 = P[2] * P[2] % p
    Z2Z2 = Q[2] * Q[2] % p
    if (P[0] * Z2Z2 - Q[0] * Z1Z1) % p:
        return False
    return (P[1] * Z2Z2 * Q[2] - Q[1] * Z1Z1 * P[2]) % p == 0


def _double(X1, Y1, Z1, ZZ, p, a, c: OpCounters) -> JacobianPoint:
    """Doubling tail given ``ZZ = Z1^2``: 7S + 1M."""
    XX = X1 * X1 % p
    YY = Y1 * Y1 % p
    YYYY = YY * YY % p
    S = 2 * ((X1 + YY) ** 2 - XX - YYYY) % p
    if a:
        M = (3 * XX + a * (ZZ * ZZ % p)) % p
    else:
        M = 3 * XX  # ZZ^2 is still charged below
    T = (M * M - 2 * S) % p
    Y3 = (M * (S - T) - 8 * YYYY) % p
    Z3 = ((Y1 + Z1) ** 2 - YY - ZZ) % p
    c.mod_sqrs += 7
    c.mod_muls += DBL_MULS
    c.mod_adds += DBL_LINEAR
    if Z3 == 0:
        return INFINITY
    return JacobianPoint(T, Y3, Z3)


def point_double(P: JacobianPoint, curve: CurveParams, counters: Optional[OpCounters] = None) -> JacobianPoint:
    c = _counters(counters)
    c.point_doubles += 1
    X1, Y1, Z1 = P
    if Z1 == 0:
        return INFINITY
    p = curve.p
    ZZ = Z1 * Z1 % p
    c.mod_sqrs += 1
    return _double(X1, Y1, Z1, ZZ, p, curve.a, c)


def _add_tail(X1, Y1, Z1, Z2, Z1Z1, Z2Z2, U1, U2, S1, S2, p, c: OpCounters) -> JacobianPoint:
    """Generic chord addition after the shared pre-join values: 3S + 5M."""
    H = U2 - U1
    I = 4 * H * H % p
    J = H * I % p
    r = 2 * (S2 - S1)
    V = U1 * I % p
    X3 = (r * r - J - 2 * V) % p
    Y3 = (r * (V - X3) - 2 * S1 * J) % p
    Z3 = ((Z1 + Z2) ** 2 - Z1Z1 - Z2Z2) * H % p
    c.mod_sqrs += 3
    c.mod_muls += 5
    c.mod_adds += ADD_LINEAR
    return JacobianPoint(X3, Y3, Z3)


def point_add(P: JacobianPoint, Q: JacobianPoint, curve: CurveParams, counters: Optional[OpCounters] = None) -> JacobianPoint:
    """Chord addition of distinct points.  Raises :class:`EqualInputsError`
    when ``P == Q``."""
    c = _counters(counters)
    c.point_adds += 1
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    if Z1 == 0:
        return normalize(Q)
    if Z2 == 0:
        return P
    p = curve.p
    Z1Z1 = Z1 * Z1 % p
    Z2Z2 = Z2 * Z2 % p
    U1 = X1 * Z2Z2 % p
    U2 = X2 * Z1Z1 % p
    S1 = Y1 * Z2 * Z2Z2 % p
    S2 = Y2 * Z1 * Z1Z1 % p
    c.mod_sqrs += 2
    c.mod_muls += 6
    if U1 == U2:
        if S1 == S2:
            raise EqualInputsError("point_add called with equal points")
        c.mod_sqrs += 3
        c.mod_muls += 5
        c.mod_adds += ADD_LINEAR
        return INFINITY
    return _add_tail(X1, Y1, Z1, Z2, Z1Z1, Z2Z2, U1, U2, S1, S2, p, c)


def unified_double_add(P: JacobianPoint, Q: JacobianPoint, curve: CurveParams,
                       counters: Optional[OpCounters] = None) -> JacobianPoint:
    """Total group addition through one entry point.

    The pre-join stage computes ``U1, U2, S1, S2`` once; the equality check
    ``X1 Z2^2 == X2 Z1^2 and Y1 Z2^3 == Y2 Z1^3`` then selects the doubling
    or the chord tail.  The doubling tail reuses ``Z1^2`` from the pre-join.
    """
    c = counters if counters is not None else OpCounters()
    c.uda_ops += 1
    X1, Y1, Z1 = P
    X2, Y2, Z2 = Q
    if Z1 == 0:
        c.point_adds += 1
        return normalize(Q)
    if Z2 == 0:
        c.point_adds += 1
        return P
    p = curve.p
    Z1Z1 = Z1 * Z1 % p
    Z2Z2 = Z2 * Z2 % p
    U1 = X1 * Z2Z2 % p
    U2 = X2 * Z1Z1 % p
    S1 = Y1 * Z2 * Z2Z2 % p
    S2 = Y2 * Z1 * Z1Z1 % p
    c.mod_sqrs += UDA_PREJOIN_SQRS
    c.mod_muls += UDA_PREJOIN_MULS
    if U1 == U2:
        if S1 == S2:
            c.point_doubles += 1
            return _double(X1, Y1, Z1, Z1Z1, p, curve.a, c)
        # P == -Q: the chord tail still runs and lands on Z3 = 0
        c.point_adds += 1
        c.mod_sqrs += 3
        c.mod_muls += 5
        c.mod_adds += ADD_LINEAR
        return INFINITY
    c.point_adds += 1
    return _add_tail(X1, Y1, Z1, Z2, Z1Z1, Z2Z2, U1, U2, S1, S2, p, c)


def scalar_mul_double_and_add(s: int, P: Point, curve: CurveParams,
                              counters: Optional[OpCounters] = None,
                              bits: Optional[int] = None) -> JacobianPoint:
    """MSB-first double-and-add over ``bits`` (default: the curve's scalar
    width) bit positions: one doubling per bit, one addition per set bit."""
    c = _counters(counters)
    n = curve.scalar_bits if bits is None else bits
    if s < 0 or s >> n:
        raise ValueError(f"scalar does not fit in {n} bits")
    if isinstance(P, AffinePoint):
        P = to_jacobian(P)
    Q = INFINITY
    for j in range(n - 1, -1, -1):
        Q = point_double(Q, curve, c)
        if (s >> j) & 1:
            Q = unified_double_add(Q, P, curve, c)
    return Q


def jacobian_scale(P: JacobianPoint, lam: int, curve: CurveParams) -> JacobianPoint:
    """Same projective class: ``(lam^2 X, lam^3 Y, lam Z)``."""
    p = curve.p
    l2 = lam * lam % p
    return JacobianPoint(P[0] * l2 % p, P[1] * l2 * lam % p, P[2] * lam % p)


def batch_to_affine(points, curve: CurveParams):
    """``to_affine`` over a list with a single field inversion."""
    p = curve.p
    zs = [P[2] for P in points]
    prefix = []
    acc = mpz(1)
    for z in zs:
        prefix.append(acc)
        if z:
            acc = acc * z % p
    inv = gmpy2.invert(acc, p)
    out = [None] * len(points)
    for i in range(len(points) - 1, -1, -1):
        z = zs[i]
        if not z:
            out[i] = AFFINE_INFINITY
            continue
        zi = inv * prefix[i] % p
        inv = inv * z % p
        zi2 = zi * zi % p
        X, Y = points[i][0], points[i][1]
        out[i] = AffinePoint(X * zi2 % p, Y * zi2 * zi % p, False)
    return out
