"""Test-vector generation and the line-oriented text formats.

Vector file::

    curve=<name> m=<count>
    <scalar hex>                 (m lines)
    <x hex> <y hex> | inf        (m lines)
    result <x hex> <y hex> | result inf     (optional)

Hex is lowercase, big-endian, unprefixed and zero-padded: field elements to
``ceil(bits(p)/4)`` digits, scalars to ``ceil(N/4)`` digits.
"""
from __future__ import annotations

import csv
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Union

from .curve import (
    INFINITY,
    AffinePoint,
    CurveParams,
    batch_to_affine,
    is_on_curve,
    point_double,
    to_jacobian,
    unified_double_add,
)
from .curves import get_curve
from .field import from_hex, to_hex

BENCH_HEADER = ("curve", "algo", "m", "k", "seconds", "mpps",
                "mod_muls", "point_adds", "point_doubles")

_TABLE_BITS = 8


class VectorFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class VectorSet:
    curve_name: str
    scalars: List[int]
    points: List[AffinePoint]
    expected_result: Optional[AffinePoint] = None

    @property
    def m(self) -> int:
        return len(self.scalars)

    @property
    def curve(self) -> CurveParams:
        return get_curve(self.curve_name)


_TABLES: dict = {}


def _fixed_base_table(curve: CurveParams):
    """``table[w][d] = d * 2^(8w) * G`` covering the group order."""
    if curve.name in _TABLES:
        return _TABLES[curve.name]
    n_windows = -(-curve.order.bit_length() // _TABLE_BITS)
    base = to_jacobian(curve.generator)
    table = []
    for _ in range(n_windows):
        row = [INFINITY, base]
        for _ in range(2, 1 << _TABLE_BITS):
            row.append(unified_double_add(row[-1], base, curve))
        table.append(row)
        for _ in range(_TABLE_BITS):
            base = point_double(base, curve)
    _TABLES[curve.name] = table
    return table


def fixed_base_mul(h: int, curve: CurveParams):
    table = _fixed_base_table(curve)
    mask = (1 << _TABLE_BITS) - 1
    acc = INFINITY
    w = 0
    while h:
        d = h & mask
        if d:
            acc = unified_double_add(acc, table[w][d], curve)
        h >>= _TABLE_BITS
        w += 1
    return acc


def generate_vectors(curve: Union[CurveParams, str], m: int, seed: int) -> VectorSet:
    """Scalars uniform in ``[0, 2^N)``; points ``h_i * G`` for random
    ``h_i`` in ``[1, r)``.  A pure function of ``(curve, m, seed)``."""
    if isinstance(curve, str):
        curve = get_curve(curve)
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = random.Random(f"{curve.name}:{m}:{seed}")
    scalars = [rng.getrandbits(curve.scalar_bits) for _ in range(m)]
    hs = [rng.randrange(1, curve.order) for _ in range(m)]
    points = batch_to_affine([fixed_base_mul(h, curve) for h in hs], curve)
    return VectorSet(curve.name, scalars, points)


def _point_text(P: AffinePoint, curve: CurveParams) -> str:
    if P.is_infinity:
        return "inf"
    return f"{to_hex(P.x, curve.field)} {to_hex(P.y, curve.field)}"


def format_point(P: AffinePoint, curve: CurveParams) -> str:
    return _point_text(P, curve)


def scalar_hex(s: int, curve: CurveParams) -> str:
    return format(s, "x").zfill(-(-curve.scalar_bits // 4))


def write_vectors(vs: VectorSet, path) -> None:
    curve = vs.curve
    if len(vs.points) != len(vs.scalars):
        raise ValueError("scalars and points differ in length")
    lines = [f"curve={curve.name} m={vs.m}"]
    lines += [scalar_hex(s, curve) for s in vs.scalars]
    lines += [_point_text(P, curve) for P in vs.points]
    if vs.expected_result is not None:
        lines.append("result " + _point_text(vs.expected_result, curve))
    Path(path).write_text("\n".join(lines) + "\n")


def _parse_point(tokens: List[str], curve: CurveParams, lineno: int) -> AffinePoint:
    if tokens == ["inf"]:
        return AffinePoint(0, 0, True)
    if len(tokens) != 2:
        raise VectorFormatError("expected '<x hex> <y hex>' or 'inf'", lineno)
    try:
        P = AffinePoint(from_hex(tokens[0], curve.field), from_hex(tokens[1], curve.field))
    except ValueError as exc:
        raise VectorFormatError(str(exc), lineno) from None
    if not is_on_curve(P, curve):
        raise VectorFormatError(f"point not on curve {curve.name}", lineno)
    return P


def read_vectors(path) -> VectorSet:
    lines = Path(path).read_text().splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise VectorFormatError("empty file", 1)
    header = dict(tok.split("=", 1) for tok in lines[0].split() if "=" in tok)
    if set(header) != {"curve", "m"} or len(lines[0].split()) != 2:
        raise VectorFormatError("malformed header, expected 'curve=<name> m=<count>'", 1)
    try:
        curve = get_curve(header["curve"])
    except KeyError as exc:
        raise VectorFormatError(exc.args[0], 1) from None
    try:
        m = int(header["m"])
    except ValueError:
        raise VectorFormatError(f"bad count {header['m']!r}", 1) from None
    if m < 1:
        raise VectorFormatError("m must be >= 1", 1)

    body = lines[1:]
    has_result = bool(body) and body[-1].split()[:1] == ["result"]
    if len(body) - has_result != 2 * m:
        raise VectorFormatError(
            f"count mismatch: header declares m={m} but found {len(body) - has_result} "
            f"data lines (expected {2 * m})", len(lines))

    scalars = []
    limit = 1 << curve.scalar_bits
    width = -(-curve.scalar_bits // 4)
    for i in range(m):
        lineno = i + 2
        text = body[i].strip()
        try:
            if not text or len(text) > width:
                raise ValueError
            s = int(text, 16)
        except ValueError:
            raise VectorFormatError(f"bad scalar {text!r}", lineno) from None
        if s >= limit:
            raise VectorFormatError(f"scalar wider than {curve.scalar_bits} bits", lineno)
        scalars.append(s)

    points = [_parse_point(body[m + i].split(), curve, m + i + 2) for i in range(m)]
    expected = None
    if has_result:
        expected = _parse_point(body[-1].split()[1:], curve, len(lines))
    return VectorSet(curve.name, scalars, points, expected)


@dataclass
class BenchRow:
    curve: str
    algo: str
    m: int
    k: int
    seconds: float
    mod_muls: int
    point_adds: int
    point_doubles: int

    @property
    def mpps(self) -> float:
        return self.m / self.seconds / 1e6


def write_bench_csv(rows: Iterable[BenchRow], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(BENCH_HEADER)
        for r in rows:
            writer.writerow([r.curve, r.algo, r.m, r.k, f"{r.seconds:.9g}", f"{r.mpps:.9g}",
                             r.mod_muls, r.point_adds, r.point_doubles])
