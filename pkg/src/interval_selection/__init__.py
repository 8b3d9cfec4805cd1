"""Streaming interval selection with exact rational endpoints."""

from .core import (
    EndpointKey,
    Interval,
    brute_force_optimum,
    contains,
    cprime_compare,
    intersects,
    is_proper,
    load,
    make_interval,
    offline_optimum,
)
from .estimators import (
    GeneralSelector,
    GreedySelector,
    MultiPassSelector,
    OnlineSelector,
    ProperSelector,
    check_intervals,
)
from .general import GeneralState, check_invariants, finalize, portion_string, process
from .multipass import neighbor_pass, run_multipass
from .online import ColorExhaustion, online_arrive, online_init, online_solution
from .proper import ProperViolation, ZoneTable, finalize_proper, process_proper, zone_invariants

__all__ = [
    "ColorExhaustion",
    "EndpointKey",
    "GeneralSelector",
    "GeneralState",
    "GreedySelector",
    "Interval",
    "MultiPassSelector",
    "OnlineSelector",
    "ProperSelector",
    "ProperViolation",
    "ZoneTable",
    "brute_force_optimum",
    "check_intervals",
    "check_invariants",
    "contains",
    "cprime_compare",
    "finalize",
    "finalize_proper",
    "intersects",
    "is_proper",
    "load",
    "make_interval",
    "neighbor_pass",
    "offline_optimum",
    "online_arrive",
    "online_init",
    "online_solution",
    "portion_string",
    "process",
    "process_proper",
    "run_multipass",
    "zone_invariants",
]
