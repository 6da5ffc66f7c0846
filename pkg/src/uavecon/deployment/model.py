"""Fleet, deployment and energy primitives for covering a ground interval [0, beta]."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..power import ConstantPower, PowerModel, power_from_dict

COVER_TOL = 1e-9


class InfeasibleError(Exception):
    """No covering deployment exists under the given constraints."""


@dataclass(frozen=True)
class UavSpec:
    x0: float
    h: float
    v: float
    r: float
    power: PowerModel = field(default_factory=ConstantPower)

    def __post_init__(self):
        if not (self.h > 0 and self.v > 0 and self.r > 0):
            raise ValueError(f"UAV needs h, v, r > 0, got h={self.h}, v={self.v}, r={self.r}")
        if not math.isfinite(self.x0):
            raise ValueError("initial location must be finite")

    @property
    def rate(self) -> float:
        """Energy per unit path length, g(v)/v."""
        return self.power(self.v) / self.v

    def to_dict(self) -> dict:
        return {"x0": self.x0, "h": self.h, "v": self.v, "r": self.r, "power": self.power.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "UavSpec":
        return cls(float(d["x0"]), float(d["h"]), float(d["v"]), float(d["r"]), power_from_dict(d.get("power")))


@dataclass(frozen=True)
class Fleet:
    """UAVs sorted by initial location (stable), covering target [0, beta]."""

    uavs: tuple[UavSpec, ...]
    beta: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.uavs:
            raise ValueError("fleet has no UAVs")
        object.__setattr__(self, "uavs", tuple(sorted(self.uavs, key=lambda u: u.x0)))

    def __len__(self):
        return len(self.uavs)

    def __iter__(self):
        return iter(self.uavs)

    @property
    def n(self) -> int:
        return len(self.uavs)

    @property
    def total_width(self) -> float:
        return sum(2 * u.r for u in self.uavs)

    @property
    def g_max(self) -> float:
        return max(u.power(u.v) for u in self.uavs)

    @property
    def v_min(self) -> float:
        return min(u.v for u in self.uavs)

    def grid_tolerance(self, delta: float) -> float:
        """Discretization error bound n * g_max * delta / v_min for a delta-grid solver."""
        return self.n * self.g_max * delta / self.v_min

    def to_dict(self) -> dict:
        return {"beta": self.beta, "uavs": [u.to_dict() for u in self.uavs]}

    @classmethod
    def from_dict(cls, d: dict) -> "Fleet":
        return cls(tuple(UavSpec.from_dict(u) for u in d["uavs"]), float(d["beta"]))


def load_fleet(path) -> Fleet:
    with open(path, encoding="utf-8") as fh:
        return Fleet.from_dict(json.load(fh))


def deployment_energy(uav: UavSpec, x_final: float) -> float:
    """Energy to fly from (x0, 0) straight to hover point (x_final, h)."""
    return uav.rate * math.hypot(x_final - uav.x0, uav.h)


def reachable_interval(uav: UavSpec, budget: float) -> Optional[tuple[float, float]]:
    """Hover positions affordable within ``budget``; None if the climb alone exceeds it."""
    reach = budget / uav.rate
    if reach < uav.h:
        if reach < uav.h * (1 - 1e-12):
            return None
        reach = uav.h
    s = math.sqrt(max(0.0, reach * reach - uav.h * uav.h))
    return uav.x0 - s, uav.x0 + s


def _covers(intervals: Sequence[tuple[float, float]], beta: float, tol: float = COVER_TOL) -> bool:
    frontier = 0.0
    slack = tol * max(1.0, beta)
    for lo, hi in sorted(intervals):
        if frontier >= beta - slack:
            break
        if lo > frontier + slack:
            return False
        frontier = max(frontier, hi)
    return frontier >= beta - slack


@dataclass(frozen=True)
class Deployment:
    positions: tuple[Optional[float], ...]
    energies: tuple[float, ...]
    max_energy: float
    total_energy: float
    covered: bool

    @classmethod
    def from_positions(cls, fleet: Fleet, positions: Sequence[Optional[float]]) -> "Deployment":
        if len(positions) != fleet.n:
            raise ValueError("one position (or None) per UAV is required")
        positions = tuple(None if p is None else float(p) for p in positions)
        energies = tuple(0.0 if p is None else deployment_energy(u, p) for u, p in zip(fleet.uavs, positions))
        used = [e for p, e in zip(positions, energies) if p is not None]
        covered = _covers([(p - u.r, p + u.r) for u, p in zip(fleet.uavs, positions) if p is not None],
                          fleet.beta)
        return cls(positions, energies, max(used, default=0.0), math.fsum(used), covered)

    @property
    def deployed(self) -> list[int]:
        return [i for i, p in enumerate(self.positions) if p is not None]

    def to_dict(self, fleet: Fleet | None = None, objective: str | None = None) -> dict:
        out = {
            "uavs": [{"index": i, "x_final": p, "energy": e} for i, (p, e) in enumerate(zip(self.positions, self.energies))],
            "max_energy": self.max_energy,
            "total_energy": self.total_energy,
            "deployed": len(self.deployed),
            "covered": self.covered,
        }
        if objective is not None:
            out["objective"] = objective
        if fleet is not None:
            for rec, u in zip(out["uavs"], fleet.uavs):
                rec["x0"] = u.x0
        return out


def coverage_check(deployment: Deployment, fleet: Fleet) -> bool:
    """Does the union of deployed footprints [x' - r, x' + r] contain [0, beta]?"""
    return _covers([(p - u.r, p + u.r) for u, p in zip(fleet.uavs, deployment.positions) if p is not None],
                   fleet.beta)


def drop_redundant(fleet: Fleet, deployment: Deployment) -> Deployment:
    """Ground deployed UAVs whose footprint is not needed, most expensive first."""
    positions = list(deployment.positions)
    for i in sorted(deployment.deployed, key=lambda k: -deployment.energies[k]):
        trial = positions.copy()
        trial[i] = None
        if _covers([(p - u.r, p + u.r) for u, p in zip(fleet.uavs, trial) if p is not None], fleet.beta):
            positions = trial
    return Deployment.from_positions(fleet, positions)


def network_lifetime(deployment: Deployment, e0: float, mode: str = "partial") -> float:
    """Residual energy after deployment.

    ``partial``: the bottleneck UAV's residual, e0 - max energy.
    ``full``: pooled residual (deployed count) * e0 - total energy, since drained
    UAVs offload traffic to peers. Grounded UAVs do not count.
    """
    mode = mode.lower()
    if mode == "partial":
        return e0 - deployment.max_energy
    if mode == "full":
        return len(deployment.deployed) * e0 - deployment.total_energy
    raise ValueError(f"mode must be 'partial' or 'full', got {mode!r}")
