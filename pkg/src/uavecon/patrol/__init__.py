"""Cooperative patrol planning: single-cell schemes, postman tours, k-way splits."""
from .cpp import Tour, cpp_tour, euler_circuit, min_weight_perfect_matching
from .graph import CellGraph, Step, build_cell_graph, load_graph
from .oracle import min_covering_walk_length
from .schemes import (
    PatrolParams,
    Scheme,
    compare_schemes,
    cyclic_delay,
    partition_delay,
    required_speed,
    scheme_cost,
)
from .simulate import simulate_max_gap
from .split import SplitResult, split_k_tours


def multicell_cost(tour, p: PatrolParams) -> float:
    """c*n + n*g(length / (n*D)) for a cyclic convoy following ``tour``.

    ``tour`` may be a :class:`Tour` or a bare tour length.
    """
    length = tour.length if isinstance(tour, Tour) else float(tour)
    return p.c * p.n + p.n * p.power(length / (p.n * p.D))


__all__ = [
    "CellGraph", "PatrolParams", "Scheme", "SplitResult", "Step", "Tour", "build_cell_graph",
    "compare_schemes", "cpp_tour", "cyclic_delay", "euler_circuit", "load_graph",
    "min_covering_walk_length", "min_weight_perfect_matching", "multicell_cost", "partition_delay",
    "required_speed", "scheme_cost", "simulate_max_gap", "split_k_tours",
]
