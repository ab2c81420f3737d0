"""Capacity of MIMO channels under joint total and per-antenna power constraints."""

from ._mimocap import (
    ConvergenceError,
    DomainError,
    Error,
    InfeasibleError,
    InputError,
    PreconditionError,
    RoutingError,
    SolveReport,
    StepError,
    calculate_alpha,
    channel_rank,
    channel_to_json,
    cross_validate,
    fixtures,
    kkt_residual,
    load_channel,
    mutual_information,
    route,
    run_acceptance,
    solve,
    waterfill,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "Error",
    "InfeasibleError",
    "InputError",
    "PreconditionError",
    "RoutingError",
    "SolveReport",
    "StepError",
    "calculate_alpha",
    "channel_rank",
    "channel_to_json",
    "cross_validate",
    "fixtures",
    "kkt_residual",
    "load_channel",
    "mutual_information",
    "route",
    "run_acceptance",
    "solve",
    "waterfill",
]
