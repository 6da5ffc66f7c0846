"""Single-cell cooperative patrol: partition vs cyclic schemes."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from ..power import ConstantPower, PowerModel


class Scheme(str, Enum):
    PARTITION = "partition"
    CYCLIC = "cyclic"


@dataclass(frozen=True)
class PatrolParams:
    """A cell edge of length L with a depopulated arc of length deltaL."""

    L: float
    deltaL: float = 0.0
    n: int = 1
    D: float = 1.0
    c: float = 0.0
    power: PowerModel = field(default_factory=ConstantPower)

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("L must be positive")
        if not 0 <= self.deltaL < self.L:
            raise ValueError("deltaL must lie in [0, L)")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        if not self.D > 0:
            raise ValueError("D must be positive")
        if self.c < 0:
            raise ValueError("equipment cost c must be nonnegative")


def partition_delay(p: PatrolParams, v: float) -> float:
    """Worst revisit gap when each UAV sweeps its own share of the populated edge."""
    if not v > 0:
        raise ValueError("speed must be positive")
    return 2 * (p.L - p.deltaL) / (p.n * v)


def cyclic_delay(p: PatrolParams, v: float) -> float:
    """Revisit gap for n evenly spaced UAVs circulating the whole edge."""
    if not v > 0:
        raise ValueError("speed must be positive")
    return p.L / (p.n * v)


def required_speed(scheme: Scheme | str, p: PatrolParams) -> float:
    scheme = Scheme(scheme)
    if scheme is Scheme.PARTITION:
        return 2 * (p.L - p.deltaL) / (p.n * p.D)
    return p.L / (p.n * p.D)


def scheme_cost(scheme: Scheme | str, p: PatrolParams) -> float:
    """Capital plus operating cost: c*n + n*g(v) at the speed meeting delay D."""
    return p.c * p.n + p.n * p.power(required_speed(scheme, p))


def compare_schemes(p: PatrolParams) -> tuple[Scheme, dict[Scheme, float]]:
    costs = {s: scheme_cost(s, p) for s in Scheme}
    part, cyc = costs[Scheme.PARTITION], costs[Scheme.CYCLIC]
    # ties go to cyclic
    if part < cyc - 1e-12 * max(1.0, abs(cyc)):
        return Scheme.PARTITION, costs
    return Scheme.CYCLIC, costs
