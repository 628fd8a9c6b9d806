"""Performance model of a shared-UDA bucket-method accelerator.

Phases, all feeding one fully pipelined unified double-add unit (UDA) that
accepts one operation per cycle and returns it ``L`` cycles later:

* fill   -- ``S`` bucket array managers (BAMs) stream ``(digit, point)``
  pairs, one window at a time, and add each point into its bucket.  A pair
  whose bucket was updated by the same BAM less than ``L`` cycles ago is a
  read-after-write hazard and is stalled or deferred.
* reduce -- each finished bucket array is reduced by the recursive bucket
  method (IS-RBAM).  Its operations only take UDA slots no BAM wants, start
  ``L`` cycles after the window's last fill issue, and the result appears
  after the dependent inner running sums and combine.
* combine -- the window results are merged by a serial double-and-add chain
  (DNA) in which every operation waits ``L`` cycles for its predecessor.

Seconds are ``cycles / fmax`` plus a host overhead of a fixed term and a
per-byte scalar transfer term.
"""
from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence

import numpy as np

from ..msm import recursive_reduce_op_count, window_count
from . import kernel

STALL = "stall"
DEFER = "defer"
STICKY = "sticky"
INTERLEAVE = "interleave"
WORD_BITS = 64


@dataclass(frozen=True)
class SimConfig:
    bam_count: int = 1
    uda_latency: int = 270
    fmax_hz: float = 351e6
    window_bits: int = 12
    scalar_bits: int = 381
    msm_size: int = 1 << 20
    hazard_policy: str = STALL
    defer_queue_depth: int = 32
    arbitration: str = STICKY
    inner_window_bits: int = 4
    field_bits: int = 0              # 0: same as scalar_bits
    memory_channels: int = 4
    channel_words_per_cycle: float = 8.0
    host_fixed_seconds: float = 5e-4
    host_bytes_per_second: float = 16e9
    seed: int = 0
    hazard_free: bool = False

    def __post_init__(self):
        for name in ("bam_count", "uda_latency", "window_bits", "scalar_bits",
                     "defer_queue_depth", "inner_window_bits", "memory_channels"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        for name in ("fmax_hz", "channel_words_per_cycle", "host_bytes_per_second"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.msm_size < 0 or self.host_fixed_seconds < 0 or self.field_bits < 0:
            raise ValueError("msm_size, host_fixed_seconds and field_bits must be >= 0")
        if self.window_bits > 24:
            raise ValueError("window_bits must be <= 24")
        if self.inner_window_bits > self.window_bits:
            raise ValueError("inner_window_bits must not exceed window_bits")
        if self.hazard_policy not in (STALL, DEFER):
            raise ValueError(f"hazard_policy must be {STALL!r} or {DEFER!r}")
        if self.arbitration not in (STICKY, INTERLEAVE):
            raise ValueError(f"arbitration must be {STICKY!r} or {INTERLEAVE!r}")
        if self.bam_count > self.windows:
            raise ValueError(f"bam_count {self.bam_count} exceeds window count {self.windows}")
        if self.hazard_free:
            if (1 << self.top_window_bits) - 1 < self.uda_latency:
                raise ValueError("hazard-free workload needs at least L buckets in every window")

    @property
    def windows(self) -> int:
        return window_count(self.scalar_bits, self.window_bits)

    @property
    def top_window_bits(self) -> int:
        return self.scalar_bits - self.window_bits * (self.windows - 1)

    @property
    def pair_words(self) -> int:
        fb = self.field_bits or self.scalar_bits
        return -(-(self.scalar_bits + 2 * fb) // WORD_BITS)

    @property
    def pairs_per_cycle(self) -> float:
        return self.memory_channels * self.channel_words_per_cycle / self.pair_words

    def replace(self, **changes) -> "SimConfig":
        return dataclasses.replace(self, **changes)


class StreamEvent(NamedTuple):
    cycle: int
    bam_id: int
    window: int
    bucket_index: int
    kind: str = "fill"


@dataclass(frozen=True)
class SimReport:
    total_cycles: int
    total_seconds: float
    uda_utilization: float
    stall_cycles: int
    deferred_replays: int
    throughput_mpps: float
    fill_cycles: int
    rbam_reduce_cycles: int
    dna_combine_cycles: int
    fill_ops: int
    reduce_ops: int
    combine_ops: int
    ideal_cycles: int

    @property
    def issued_ops(self) -> int:
        return self.fill_ops + self.reduce_ops + self.combine_ops


def rbam_ops_per_window(k: int, k_inner: int) -> int:
    """UDA operations to reduce one ``k``-bit bucket array recursively."""
    return recursive_reduce_op_count(k, k_inner)


def rbam_chain_cycles(config: SimConfig) -> int:
    """Latency from the first inner result of a window to its reduced value.

    The inner running sums run side by side; each is a chain of
    ``2^k' - 1`` dependent accumulator updates, followed by the serial inner
    combine.
    """
    k, ki = config.window_bits, config.inner_window_bits
    p_in = window_count(k, ki)
    steps = ((1 << ki) - 1) + (ki + 1) * (p_in - 1)
    return steps * config.uda_latency


def dna_ops(config: SimConfig) -> int:
    return (config.window_bits + 1) * (config.windows - 1)


def _tail_cycles(config: SimConfig) -> int:
    return config.uda_latency * (1 + dna_ops(config)) + rbam_chain_cycles(config)


def ideal_cycle_bound(config: SimConfig) -> int:
    """Lower bound on ``total_cycles``, independent of the digit stream.

    With ``F = p*m`` fill slots and ``R`` reduction operations per window:
    the ``n``-th window to finish filling cannot do so before cycle
    ``n*m - 1``, so its reduction cannot start before ``n*m - 1 + L``; the
    ``p - n + 1`` windows finishing no earlier than it need ``(p-n+1)*R``
    slots, none of which can be taken before the fill slots still pending
    are issued.  The latest of these is followed by the inner chain latency
    and the serial combine chain.  A hazard-free stream reaches the bound.
    """
    L = config.uda_latency
    p, m = config.windows, config.msm_size
    if m == 0:
        return 3 * L
    R = rbam_ops_per_window(config.window_bits, config.inner_window_bits)
    F = p * m
    last = max(max(n * m - 1 + L, F) + (p - n + 1) * R for n in range(1, p + 1)) - 1
    return last + _tail_cycles(config)


def _run(config: SimConfig, digits: Optional[np.ndarray], record: bool):
    p, m = config.windows, config.msm_size
    if digits is None:
        digits = np.zeros((0, 0), np.int64)
    else:
        digits = np.ascontiguousarray(digits, dtype=np.int64)
        if digits.shape != (p, m):
            raise ValueError(f"digit matrix must have shape ({p}, {m})")
        if digits.min(initial=0) < 0 or digits.max(initial=0) >> config.window_bits:
            raise ValueError("digit outside [0, 2^k)")
    return kernel.run_fill(
        config.bam_count, p, m, config.window_bits, config.top_window_bits,
        config.uda_latency, kernel.DEFER if config.hazard_policy == DEFER else kernel.STALL,
        config.defer_queue_depth, config.seed, config.hazard_free, float(config.pairs_per_cycle),
        rbam_ops_per_window(config.window_bits, config.inner_window_bits), digits,
        config.arbitration == STICKY, record)


def schedule_stream(config: SimConfig, digits: Optional[np.ndarray] = None):
    """Bucket-fill schedule only.  Returns ``(cycles, stalls, replays, events)``
    where ``cycles`` is one past the last fill issue and ``events`` lists every
    issue in order."""
    if config.msm_size == 0:
        return 0, 0, 0, []
    fill_end, _, _, stalls, replays, _, trace = _run(config, digits, True)
    events = [StreamEvent(int(c), int(b), int(w), int(d)) for c, b, w, d in trace]
    return int(fill_end), int(stalls), int(replays), events


def host_seconds(config: SimConfig) -> float:
    scalar_bytes = -(-config.scalar_bits // 8) * config.msm_size
    return config.host_fixed_seconds + scalar_bytes / config.host_bytes_per_second


def simulate(config: SimConfig, digits: Optional[np.ndarray] = None) -> SimReport:
    """Run the model.  ``digits`` optionally supplies the ``(p, m)`` digit
    matrix; otherwise a seeded stream is generated."""
    L = config.uda_latency
    p, m = config.windows, config.msm_size
    ideal = ideal_cycle_bound(config)
    if m == 0:
        return SimReport(ideal, ideal / config.fmax_hz + host_seconds(config), 0.0, 0, 0, 0.0,
                         L, L, L, 0, 0, 0, ideal)

    fill_end, rbam_last, _, stalls, replays, fill_uda, _ = _run(config, digits, False)
    reduce_done = int(rbam_last.max()) + L + rbam_chain_cycles(config)
    combine = dna_ops(config) * L
    total = reduce_done + combine
    seconds = total / config.fmax_hz + host_seconds(config)
    reduce_ops = p * rbam_ops_per_window(config.window_bits, config.inner_window_bits)
    issued = int(fill_uda) + reduce_ops + dna_ops(config)
    return SimReport(
        total_cycles=int(total),
        total_seconds=seconds,
        uda_utilization=issued / total,
        stall_cycles=int(stalls),
        deferred_replays=int(replays),
        throughput_mpps=m / seconds / 1e6,
        fill_cycles=int(fill_end),
        rbam_reduce_cycles=int(reduce_done - fill_end),
        dna_combine_cycles=int(combine),
        fill_ops=int(fill_uda),
        reduce_ops=reduce_ops,
        combine_ops=dna_ops(config),
        ideal_cycles=ideal,
    )


def sweep(configs: Sequence[SimConfig]) -> List[SimReport]:
    if not configs:
        raise ValueError("empty sweep")
    return [simulate(c) for c in configs]


# -- configuration files and CSV ------------------------------------------

_ALIASES = {"bams": "bam_count", "latency": "uda_latency", "fmax": "fmax_hz",
            "window": "window_bits", "size": "msm_size", "hazard": "hazard_policy",
            "inner_window": "inner_window_bits"}


def _coerce(name: str, text: str):
    ftype = {f.name: f.type for f in fields(SimConfig)}[name]
    text = text.strip()
    if ftype in ("bool", bool):
        low = text.lower()
        if low not in ("1", "0", "true", "false", "yes", "no"):
            raise ValueError(f"{name}: expected a boolean, got {text!r}")
        return low in ("1", "true", "yes")
    if ftype in ("int", int):
        value = float(text)
        if value != int(value):
            raise ValueError(f"{name}: expected an integer, got {text!r}")
        return int(value)
    if ftype in ("float", float):
        return float(text)
    return text


def config_from_mapping(values: Dict[str, str], base: Optional[SimConfig] = None) -> SimConfig:
    known = {f.name for f in fields(SimConfig)}
    changes = {}
    for key, text in values.items():
        name = _ALIASES.get(key.replace("-", "_"), key.replace("-", "_"))
        if name not in known:
            raise KeyError(f"unknown simulator parameter {key!r}")
        changes[name] = _coerce(name, str(text))
    return dataclasses.replace(base or SimConfig(), **changes)


def load_config(path) -> SimConfig:
    """``key=value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return config_from_mapping(values)


CONFIG_FIELDS = tuple(f.name for f in fields(SimConfig))
REPORT_FIELDS = tuple(f.name for f in fields(SimReport))


def write_sim_csv(configs: Iterable[SimConfig], reports: Iterable[SimReport], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CONFIG_FIELDS + REPORT_FIELDS)
        for c, r in zip(configs, reports):
            writer.writerow([getattr(c, n) for n in CONFIG_FIELDS] + [getattr(r, n) for n in REPORT_FIELDS])


# -- cross-check against the functional engine -----------------------------

def cross_check(config: SimConfig, curve=None, seed: int = 0) -> Dict[str, tuple]:
    """Replay a real scalar set through the model and the engine.

    Returns ``{phase: (modeled_ops, counted_ops)}`` for fill, reduce and
    combine.  ``config.scalar_bits`` must match the curve.
    """
    from ..curves import get_curve
    from ..msm import MsmConfig, msm_pippenger, slice_scalars
    from ..vectors import generate_vectors

    if curve is None:
        curve = {254: "bn128", 381: "bls12-381"}.get(config.scalar_bits, "toy")
    curve = get_curve(curve) if isinstance(curve, str) else curve
    if curve.scalar_bits != config.scalar_bits:
        raise ValueError("config.scalar_bits does not match the curve")
    vs = generate_vectors(curve, config.msm_size, seed)
    digits = np.array(slice_scalars(vs.scalars, curve.scalar_bits, config.window_bits).slices,
                      dtype=np.int64)
    report = simulate(config, digits)
    phases: dict = {}
    msm_pippenger(vs.scalars, vs.points, curve,
                  MsmConfig(config.window_bits, "recursive", config.inner_window_bits),
                  phases=phases)
    return {
        "fill": (report.fill_ops, phases["fill"].uda_ops),
        "reduce": (report.reduce_ops, phases["reduce"].point_ops),
        "combine": (report.combine_ops, phases["combine"].point_ops),
    }


def saturation_sizes(lo: float = 1e3, hi: float = 64e6, per_decade: int = 2) -> List[int]:
    n = int(round(math.log10(hi / lo) * per_decade))
    return sorted({int(round(lo * (hi / lo) ** (i / n))) for i in range(n + 1)})
