"""Cycle-level performance model of the shared-UDA accelerator."""
from .model import (
    DEFER,
    INTERLEAVE,
    STALL,
    STICKY,
    SimConfig,
    SimReport,
    StreamEvent,
    config_from_mapping,
    cross_check,
    ideal_cycle_bound,
    load_config,
    schedule_stream,
    simulate,
    sweep,
    write_sim_csv,
)

__all__ = [
    "DEFER", "INTERLEAVE", "STALL", "STICKY", "SimConfig", "SimReport", "StreamEvent",
    "config_from_mapping", "cross_check", "ideal_cycle_bound", "load_config",
    "schedule_stream", "simulate", "sweep", "write_sim_csv",
]
