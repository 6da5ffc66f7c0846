"""Min-sum (total) deployment energy under full coverage, by frontier DP."""
from __future__ import annotations

import math
from itertools import groupby
from typing import Optional

import numpy as np

from .model import Deployment, Fleet, InfeasibleError, UavSpec

# UAVs sharing a start location may be dispatched in any order; up to this
# many are permuted exactly (subset DP), larger groups keep index order.
MAX_TIE_GROUP = 8


def frontier_grid(beta: float, delta: float) -> np.ndarray:
    """0, delta, 2*delta, ... with the last point pinned to beta."""
    k = max(1, math.ceil(beta / delta - 1e-9))
    return np.minimum(np.arange(k + 1) * delta, beta)


def _transition(u: UavSpec, F: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cost and hover point for moving the frontier from F[s] to F[t] with one UAV."""
    lo = F[None, :] - u.r
    hi = F[:, None] + u.r
    x = np.minimum(np.maximum(u.x0, lo), hi)
    cost = u.rate * np.hypot(x - u.x0, u.h)
    idx = np.arange(len(F))
    ok = (lo <= hi + 1e-12) & (idx[None, :] > idx[:, None])
    return np.where(ok, cost, np.inf), x


def _relax(dp: np.ndarray, cost: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    total = dp[:, None] + cost
    src = np.argmin(total, axis=0)
    return total[src, np.arange(len(dp))], src


def minsum_dp(fleet: Fleet, delta: Optional[float] = None) -> Deployment:
    """Minimize total deployment energy, dispatching UAVs in initial-location order.

    State after a prefix of UAVs is a grid frontier F (coverage of [0, F] is
    certified). Deploying a UAV from F to a target frontier F2 costs its
    energy at the cheapest hover point with x - r <= F and x + r >= F2, i.e.
    x0 clamped into [F2 - r, F + r]. The result is within
    ``fleet.grid_tolerance(delta)`` of the best order-preserving deployment.
    """
    beta = fleet.beta
    delta = beta / 200 if delta is None else delta
    if not delta > 0:
        raise ValueError("delta must be positive")
    F = frontier_grid(beta, delta)
    K = len(F) - 1
    trans = [_transition(u, F) for u in fleet.uavs]

    groups: list[list[int]] = []
    for _, members in groupby(range(fleet.n), key=lambda i: fleet.uavs[i].x0):
        members = list(members)
        if len(members) <= MAX_TIE_GROUP:
            groups.append(members)
        else:
            groups.extend([i] for i in members)

    dp = np.full(K + 1, np.inf)
    dp[0] = 0.0
    history = []
    cols = np.arange(K + 1)
    for members in groups:
        m = len(members)
        val = np.full((1 << m, K + 1), np.inf)
        last = np.full((1 << m, K + 1), -1)
        src = np.zeros((1 << m, K + 1), dtype=int)
        val[0] = dp
        for mask in range(1 << m):
            if not np.isfinite(val[mask]).any():
                continue
            for j in range(m):
                if mask >> j & 1:
                    continue
                via, s = _relax(val[mask], trans[members[j]][0])
                nm = mask | 1 << j
                better = via < val[nm]
                val[nm] = np.where(better, via, val[nm])
                last[nm] = np.where(better, j, last[nm])
                src[nm] = np.where(better, s, src[nm])
        pick = np.argmin(val, axis=0)
        dp = val[pick, cols]
        history.append((members, pick, last, src))
    if not np.isfinite(dp[K]):
        raise InfeasibleError("no covering deployment reaches beta")

    positions: list[Optional[float]] = [None] * fleet.n
    state = K
    for members, pick, last, src in reversed(history):
        mask = int(pick[state])
        while mask:
            j = int(last[mask, state])
            s = int(src[mask, state])
            i = members[j]
            positions[i] = float(trans[i][1][s, state])
            mask ^= 1 << j
            state = s
    return Deployment.from_positions(fleet, positions)
