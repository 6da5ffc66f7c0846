"""Shared random-instance generators for the test suite."""
import numpy as np

from uavecon.deployment import Fleet, UavSpec
from uavecon.power import ConstantPower


def random_fleet(rng: np.random.Generator, colocated: bool = False, beta: float = 10.0, max_n: int = 4) -> Fleet:
    """Heterogeneous fleet with n <= max_n, total width >= 1.1 beta.

    Co-located fleets share a station at x0 <= 0.
    """
    while True:
        n = int(rng.integers(1, max_n + 1))
        station = -rng.uniform(0, 5)
        uavs = []
        for _ in range(n):
            x0 = station if colocated else float(rng.uniform(-2, beta + 2))
            uavs.append(UavSpec(x0, float(rng.uniform(0.5, 5)), float(rng.uniform(0.5, 3)),
                                float(rng.uniform(1.5, 6)), ConstantPower(float(rng.uniform(0.5, 2)))))
        fleet = Fleet(tuple(uavs), beta)
        if fleet.total_width >= 1.1 * beta:
            return fleet
