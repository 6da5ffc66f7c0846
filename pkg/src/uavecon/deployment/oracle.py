"""Exhaustive δ-grid oracle for tiny fleets.

Independent of the production solvers: enumerates every subset of UAVs and
every order in which their footprints can be chained left to right, and
minimizes over all grid hover positions (the position search is done as a
dense min-over-pairs sweep, equivalent to enumerating position tuples).
A minimal cover can always be ordered so that both footprint edges are
nondecreasing, which is the only structure assumed.
"""
from __future__ import annotations

import itertools
import math
from typing import Optional

import numpy as np

from .model import Deployment, Fleet, InfeasibleError

MAX_ORACLE_UAVS = 5
_EPS = 1e-12


def _candidate_positions(fleet: Fleet, delta: float) -> list[np.ndarray]:
    out = []
    for u in fleet.uavs:
        k0 = math.ceil(-u.r / delta - 1e-9)
        k1 = math.floor((fleet.beta + u.r) / delta + 1e-9)
        pts = np.arange(k0, k1 + 1) * delta
        if -u.r <= u.x0 <= fleet.beta + u.r:
            pts = np.append(pts, u.x0)
        out.append(np.unique(pts))
    return out


def _chains(fleet: Fleet, order_preserving: bool):
    idx = range(fleet.n)
    for size in range(1, fleet.n + 1):
        for subset in itertools.combinations(idx, size):
            for perm in itertools.permutations(subset):
                if order_preserving and any(fleet.uavs[a].x0 > fleet.uavs[b].x0 for a, b in zip(perm, perm[1:])):
                    continue
                yield perm


def brute_force_oracle(fleet: Fleet, delta: Optional[float] = None, objective: str = "minmax",
                       order_preserving: bool = True) -> Deployment:
    """Best grid deployment under ``objective`` ("minmax" or "minsum").

    ``order_preserving`` requires final positions to respect initial order
    (UAVs sharing a start location may be permuted).
    """
    if fleet.n > MAX_ORACLE_UAVS:
        raise ValueError(f"oracle is limited to {MAX_ORACLE_UAVS} UAVs, got {fleet.n}")
    objective = objective.lower().replace("-", "")
    if objective not in ("minmax", "minsum"):
        raise ValueError(f"objective must be minmax or minsum, got {objective!r}")
    combine = np.maximum if objective == "minmax" else np.add
    delta = fleet.beta / 200 if delta is None else delta
    beta = fleet.beta
    pos = _candidate_positions(fleet, delta)
    cost = [u.rate * np.hypot(p - u.x0, u.h) for u, p in zip(fleet.uavs, pos)]

    best_val, best_pos = np.inf, None
    for chain in _chains(fleet, order_preserving):
        first = chain[0]
        u = fleet.uavs[first]
        val = np.where(pos[first] - u.r <= _EPS, cost[first], np.inf)
        backs = []
        for a, b in zip(chain, chain[1:]):
            ua, ub = fleet.uavs[a], fleet.uavs[b]
            y = pos[a][:, None]
            x = pos[b][None, :]
            ok = ((y - ua.r <= x - ub.r + _EPS)      # left edges ordered
                  & (x - ub.r <= y + ua.r + _EPS)    # no gap
                  & (y + ua.r <= x + ub.r + _EPS))   # right edges ordered
            if order_preserving:
                ok &= y <= x + _EPS
            tot = np.where(ok, combine(val[:, None], cost[b][None, :]), np.inf)
            arg = np.argmin(tot, axis=0)
            val = tot[arg, np.arange(tot.shape[1])]
            backs.append(arg)
        last = fleet.uavs[chain[-1]]
        val = np.where(pos[chain[-1]] + last.r >= beta - _EPS, val, np.inf)
        j = int(np.argmin(val))
        if val[j] < best_val:
            best_val = float(val[j])
            picks = [j]
            for arg in reversed(backs):
                picks.append(int(arg[picks[-1]]))
            picks.reverse()
            best_pos = {c: float(pos[c][p]) for c, p in zip(chain, picks)}
    if best_pos is None:
        raise InfeasibleError("no covering grid deployment exists")
    return Deployment.from_positions(fleet, [best_pos.get(i) for i in range(fleet.n)])
