"""Multi-scalar multiplication strategies.

``msm_naive`` is the reference: one double-and-add per term.  ``msm_pippenger``
splits every scalar into ``p = ceil(N/k)`` windows of ``k`` bits, fills one
bucket array per window, reduces each array to ``sum(d * B[d])`` and finally
combines the window partials as ``sum(2^(k*j) * MSM_j)`` by Horner's rule.

Bucket reduction comes in two flavours:

* ``running_sum`` -- the two-accumulator descending sweep;
* ``recursive``   -- the bucket array is itself treated as a small MSM with
  scalars ``1 .. 2^k - 1`` and solved with the bucket method using
  ``inner_window_bits``.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence

from .curve import (
    INFINITY,
    AffinePoint,
    CurveParams,
    JacobianPoint,
    OffCurveError,
    OpCounters,
    is_on_curve,
    point_double,
    scalar_mul_double_and_add,
    to_jacobian,
    unified_double_add,
)

RUNNING_SUM = "running_sum"
RECURSIVE = "recursive"
PHASES = ("fill", "reduce", "combine")


@dataclass(frozen=True)
class MsmConfig:
    window_bits: int = 12
    combine_strategy: str = RUNNING_SUM
    inner_window_bits: int = 4
    parallelism_hint: int = 1

    def __post_init__(self):
        strategy = self.combine_strategy.replace("-", "_")
        object.__setattr__(self, "combine_strategy", strategy)
        if strategy not in (RUNNING_SUM, RECURSIVE):
            raise ValueError(f"unknown combine strategy {self.combine_strategy!r}")
        if not 1 <= self.window_bits <= 20:
            raise ValueError("window_bits must be in [1, 20]")
        if not 1 <= self.inner_window_bits <= self.window_bits:
            raise ValueError("inner_window_bits must be in [1, window_bits]")
        if self.parallelism_hint < 1:
            raise ValueError("parallelism_hint must be >= 1")


@dataclass
class ScalarSlices:
    window_bits: int
    slices: List[List[int]]

    @property
    def window_count(self) -> int:
        return len(self.slices)

    def recompose(self) -> List[int]:
        k = self.window_bits
        if not self.slices:
            return []
        out = [0] * len(self.slices[0])
        for j, digits in enumerate(self.slices):
            shift = k * j
            for i, d in enumerate(digits):
                out[i] += d << shift
        return out


@dataclass
class BucketArray:
    """Buckets ``1 .. 2^k - 1``.  Slot 0 stays at infinity and is never
    written."""

    k: int
    buckets: List[JacobianPoint] = field(default=None)

    def __post_init__(self):
        if self.buckets is None:
            self.buckets = [INFINITY] * (1 << self.k)

    def __getitem__(self, d: int) -> JacobianPoint:
        return self.buckets[d]

    def __setitem__(self, d: int, value: JacobianPoint) -> None:
        if d == 0:
            raise IndexError("bucket 0 is not stored")
        self.buckets[d] = value

    def __len__(self) -> int:
        return len(self.buckets)


class WindowResult(NamedTuple):
    window_index: int
    partial: JacobianPoint


def window_count(scalar_bits: int, k: int) -> int:
    return -(-scalar_bits // k)


def _as_jacobian(points: Sequence, curve: CurveParams, check: bool = True) -> List[JacobianPoint]:
    out = []
    for i, P in enumerate(points):
        if check and not is_on_curve(P, curve):
            raise OffCurveError(f"point {i} is not on {curve.name}")
        out.append(to_jacobian(P) if isinstance(P, AffinePoint) else P)
    return out


def _check_inputs(scalars: Sequence[int], points: Sequence, curve: CurveParams) -> None:
    if len(scalars) != len(points):
        raise ValueError(f"{len(scalars)} scalars but {len(points)} points")
    if not scalars:
        raise ValueError("empty MSM")
    limit = 1 << curve.scalar_bits
    for s in scalars:
        if not 0 <= s < limit:
            raise ValueError(f"scalar {s:#x} outside [0, 2^{curve.scalar_bits})")


def msm_naive(scalars: Sequence[int], points: Sequence, curve: CurveParams,
              counters: Optional[OpCounters] = None) -> JacobianPoint:
    _check_inputs(scalars, points, curve)
    c = counters if counters is not None else OpCounters()
    acc = INFINITY
    for s, P in zip(scalars, _as_jacobian(points, curve)):
        acc = unified_double_add(acc, scalar_mul_double_and_add(s, P, curve, c), curve, c)
    return acc


def slice_scalars(scalars: Sequence[int], scalar_bits: int, k: int) -> ScalarSlices:
    """LSB-first ``k``-bit digits; the top window is zero-padded when ``k``
    does not divide ``scalar_bits``."""
    if k < 1:
        raise ValueError("window width must be >= 1")
    p = window_count(scalar_bits, k)
    mask = (1 << k) - 1
    ints = [int(s) for s in scalars]
    for s in ints:
        if s < 0 or s >> scalar_bits:
            raise ValueError(f"scalar {s:#x} wider than {scalar_bits} bits")
    slices = [[(s >> (k * j)) & mask for s in ints] for j in range(p)]
    return ScalarSlices(k, slices)


def bucket_accumulate(digits: Sequence[int], points: Sequence[JacobianPoint], curve: CurveParams,
                      counters: Optional[OpCounters] = None, k: Optional[int] = None) -> BucketArray:
    if len(digits) != len(points):
        raise ValueError("digits and points differ in length")
    if k is None:
        k = max(1, max(digits, default=0).bit_length())
    c = counters if counters is not None else OpCounters()
    B = BucketArray(k)
    buckets = B.buckets
    top = 1 << k
    for d, P in zip(digits, points):
        if d == 0:
            continue
        if not 0 < d < top:
            raise ValueError(f"digit {d} outside [0, 2^{k})")
        buckets[d] = unified_double_add(buckets[d], P, curve, c)
    return B


def bucket_reduce_running_sum(B: BucketArray, curve: CurveParams,
                              counters: Optional[OpCounters] = None) -> JacobianPoint:
    """``sum(d * B[d])`` by the descending two-accumulator sweep.

    ``2 * (2^k - 1) - 1`` point operations, whatever the bucket contents.
    """
    c = counters if counters is not None else OpCounters()
    buckets = B.buckets
    top = len(buckets) - 1
    acc = INFINITY
    run = buckets[top]
    for i in range(top, 0, -1):
        acc = unified_double_add(acc, run, curve, c)
        if i > 1:
            run = unified_double_add(run, buckets[i - 1], curve, c)
    return acc


def bucket_reduce_recursive(B: BucketArray, k_inner: int, curve: CurveParams,
                            counters: Optional[OpCounters] = None) -> JacobianPoint:
    """Reduce the buckets by running the bucket method again on the pairs
    ``(d, B[d])``.  Every bucket is streamed, empty or not, so the operation
    count depends only on ``k`` and ``k_inner``."""
    k = B.k
    if not 1 <= k_inner <= k:
        raise ValueError("k_inner must be in [1, k]")
    c = counters if counters is not None else OpCounters()
    top = (1 << k) - 1
    indices = range(1, top + 1)
    pts = B.buckets[1:]
    inner = slice_scalars(indices, k, k_inner)
    results = []
    for j, digits in enumerate(inner.slices):
        inner_B = bucket_accumulate(digits, pts, curve, c, k=k_inner)
        results.append(WindowResult(j, bucket_reduce_running_sum(inner_B, curve, c)))
    return combine_windows(results, k_inner, curve, c)


def bucket_reduce_double_and_add(B: BucketArray, curve: CurveParams,
                                 counters: Optional[OpCounters] = None) -> JacobianPoint:
    """Baseline reduction: a separate ``k``-bit double-and-add per bucket."""
    c = counters if counters is not None else OpCounters()
    acc = INFINITY
    for d in range(1, len(B.buckets)):
        term = scalar_mul_double_and_add(d, B.buckets[d], curve, c, bits=B.k)
        acc = unified_double_add(acc, term, curve, c)
    return acc


def running_sum_op_count(k: int) -> int:
    return 2 * ((1 << k) - 1) - 1


def recursive_reduce_op_count(k: int, k_inner: int) -> int:
    """Point operations issued by :func:`bucket_reduce_recursive`."""
    p_in = window_count(k, k_inner)
    mask = (1 << k_inner) - 1
    top = (1 << k) - 1
    fill = sum(1 for j in range(p_in) for d in range(1, top + 1) if (d >> (k_inner * j)) & mask)
    reduce = p_in * running_sum_op_count(k_inner)
    combine = (k_inner + 1) * (p_in - 1)
    return fill + reduce + combine


def combine_windows(results: Sequence[WindowResult], k: int, curve: CurveParams,
                    counters: Optional[OpCounters] = None) -> JacobianPoint:
    """Horner evaluation of ``sum(2^(k*j) * MSM_j)`` from the top window."""
    c = counters if counters is not None else OpCounters()
    by_index = {r.window_index: r.partial for r in results}
    p = len(by_index)
    missing = sorted(set(range(p)) - set(by_index))
    if missing or len(results) != p:
        raise ValueError(f"window results incomplete or duplicated (missing {missing})")
    if p == 0:
        return INFINITY
    acc = by_index[p - 1]
    for j in range(p - 2, -1, -1):
        for _ in range(k):
            acc = point_double(acc, curve, c)
        acc = unified_double_add(acc, by_index[j], curve, c)
    return acc


def _window_job(args):
    j, digits, points, curve, config = args
    fill, reduce = OpCounters(), OpCounters()
    B = bucket_accumulate(digits, points, curve, fill, k=config.window_bits)
    if config.combine_strategy == RECURSIVE:
        partial = bucket_reduce_recursive(B, config.inner_window_bits, curve, reduce)
    else:
        partial = bucket_reduce_running_sum(B, curve, reduce)
    return WindowResult(j, partial), fill, reduce


def msm_pippenger(scalars: Sequence[int], points: Sequence, curve: CurveParams,
                  config: Optional[MsmConfig] = None, counters: Optional[OpCounters] = None,
                  phases: Optional[Dict[str, OpCounters]] = None) -> JacobianPoint:
    """Bucket-method MSM.

    ``counters`` receives the merged total; if ``phases`` is given it is
    filled with one :class:`OpCounters` per phase (``fill``, ``reduce``,
    ``combine``).
    """
    config = config or MsmConfig()
    _check_inputs(scalars, points, curve)
    jpoints = _as_jacobian(points, curve)
    sl = slice_scalars(scalars, curve.scalar_bits, config.window_bits)
    jobs = [(j, digits, jpoints, curve, config) for j, digits in enumerate(sl.slices)]
    if config.parallelism_hint > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.parallelism_hint) as pool:
            outcomes = list(pool.map(_window_job, jobs))
    else:
        outcomes = [_window_job(job) for job in jobs]

    per_phase = {name: OpCounters() for name in PHASES}
    results = []
    for result, fill, reduce in sorted(outcomes, key=lambda o: o[0].window_index):
        results.append(result)
        per_phase["fill"].merge(fill)
        per_phase["reduce"].merge(reduce)
    out = combine_windows(results, config.window_bits, curve, per_phase["combine"])

    if counters is not None:
        for name in PHASES:
            counters.merge(per_phase[name])
    if phases is not None:
        phases.update(per_phase)
    return out


def fill_ops_per_point(phases: Dict[str, OpCounters], m: int) -> float:
    """Bucket-fill point operations per input point."""
    return phases["fill"].uda_ops / m
