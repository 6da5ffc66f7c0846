"""Energy-optimal deployment of heterogeneous UAVs covering a ground interval."""
from .minmax import minmax_colocated, minmax_feasible, minmax_general
from .minsum import minsum_dp
from .model import (
    Deployment,
    Fleet,
    InfeasibleError,
    UavSpec,
    coverage_check,
    deployment_energy,
    drop_redundant,
    load_fleet,
    network_lifetime,
    reachable_interval,
)
from .oracle import brute_force_oracle

__all__ = [
    "Deployment", "Fleet", "InfeasibleError", "UavSpec", "brute_force_oracle", "coverage_check",
    "deployment_energy", "drop_redundant", "load_fleet", "minmax_colocated", "minmax_feasible",
    "minmax_general", "minsum_dp", "network_lifetime", "reachable_interval",
]
