"""Discrete-time patrol simulator measuring revisit gaps on the populated edge.

The cell edge is a loop [0, L); the populated span is [0, L - deltaL] and the
depopulated arc is the remainder. Partition UAVs bounce inside equal shares
of the populated span; cyclic UAVs circulate the full loop, evenly spaced.
A sample point counts as visited in a step when it lies on the stretch a UAV
swept during that step, so measured gaps are exact up to one step.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .schemes import PatrolParams, Scheme


def simulate_max_gap(scheme: Scheme | str, p: PatrolParams, v: float, dt: Optional[float] = None,
                     horizon: Optional[float] = None, samples: int = 401) -> float:
    scheme = Scheme(scheme)
    if not v > 0:
        raise ValueError("speed must be positive")
    n, L = int(p.n), p.L
    span = L - p.deltaL
    share = span / n
    if dt is None:
        dt = share / v / 1000
    if horizon is None:
        horizon = 6 * L / (n * v)
    steps = math.ceil(horizon / dt)
    step_len = v * dt

    pts = np.linspace(0.0, span, samples)
    if scheme is Scheme.PARTITION:
        pts = np.unique(np.concatenate([pts, np.arange(n + 1) * share]))
        lo = np.arange(n) * share
        hi = lo + share
        pos = lo.copy()
        heading = np.ones(n)
    else:
        pos = np.arange(n) * (L / n)

    last = np.full(pts.shape, np.nan)
    worst = 0.0
    for s in range(1, steps + 1):
        t = s * dt
        if scheme is Scheme.PARTITION:
            new = pos + heading * step_len
            a = np.minimum(pos, new)
            b = np.maximum(pos, new)
            over = new > hi
            under = new < lo
            b = np.where(over, hi, b)
            a = np.where(under, lo, a)
            new = np.where(over, 2 * hi - new, np.where(under, 2 * lo - new, new))
            heading = np.where(over | under, -heading, heading)
            pos = new
            hit = ((pts[None, :] >= a[:, None] - 1e-12) & (pts[None, :] <= b[:, None] + 1e-12)).any(axis=0)
        else:
            ahead = np.mod(pts[None, :] - pos[:, None], L)
            hit = ((ahead <= step_len + 1e-12) | (ahead >= L - 1e-12)).any(axis=0)
            pos = np.mod(pos + step_len, L)
        seen = hit & ~np.isnan(last)
        if seen.any():
            worst = max(worst, float(np.max(t - last[seen])))
        last[hit] = t
    return worst
