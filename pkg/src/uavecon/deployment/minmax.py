"""Min-max (bottleneck) deployment energy under full coverage."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import (
    Deployment,
    Fleet,
    InfeasibleError,
    UavSpec,
    deployment_energy,
    drop_redundant,
    reachable_interval,
)

_EPS = 1e-12


def _clamp(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def minmax_colocated(fleet: Fleet) -> Deployment:
    """Greedy right-to-left dispatch for UAVs sharing one ground station.

    The uncovered frontier starts at beta. Each round sends the unassigned UAV
    with the cheapest flight to just cover the frontier, then moves the
    frontier left by that UAV's footprint. A station at or beyond beta is
    handled by mirroring.
    """
    x0 = fleet.uavs[0].x0
    if any(abs(u.x0 - x0) > 1e-12 * max(1.0, abs(x0)) for u in fleet.uavs):
        raise ValueError("minmax_colocated needs all UAVs at one initial location")
    if 0 < x0 < fleet.beta:
        raise ValueError("the shared station must lie outside (0, beta)")
    if fleet.total_width < fleet.beta * (1 - 1e-12):
        raise InfeasibleError(f"total footprint {fleet.total_width} is shorter than beta={fleet.beta}")

    mirrored = x0 >= fleet.beta
    uavs = fleet.uavs
    if mirrored:
        uavs = tuple(UavSpec(fleet.beta - u.x0, u.h, u.v, u.r, u.power) for u in uavs)

    positions: list[Optional[float]] = [None] * len(uavs)
    frontier = fleet.beta
    free = set(range(len(uavs)))
    while frontier > _EPS * fleet.beta and free:
        best = None
        for i in sorted(free):
            u = uavs[i]
            # the last UAV may sit anywhere in [frontier - r, r]
            x = _clamp(u.x0, frontier - u.r, u.r) if 2 * u.r >= frontier else frontier - u.r
            e = deployment_energy(u, x)
            if best is None or e < best[0]:
                best = (e, i, x)
        _, i, x = best
        positions[i] = x
        free.discard(i)
        frontier = x - uavs[i].r
    if mirrored:
        positions = [None if p is None else fleet.beta - p for p in positions]
    return Deployment.from_positions(fleet, positions)


@dataclass
class _Piece:
    lo: float
    hi: float
    parent: Optional[tuple[int, int]]  # (chain slot, merged piece index)


def _merge(pieces: list[_Piece]) -> list[tuple[float, float]]:
    out: list[list[float]] = []
    for p in sorted(pieces, key=lambda q: q.lo):
        if out and p.lo <= out[-1][1] + _EPS:
            out[-1][1] = max(out[-1][1], p.hi)
        else:
            out.append([p.lo, p.hi])
    return [(a, b) for a, b in out]


def minmax_feasible(fleet: Fleet, budget: float) -> Optional[Deployment]:
    """Order-preserving covering deployment with every energy <= ``budget``, or None.

    UAVs are scanned in initial-location order (ties by rightmost reachable
    footprint edge). For each UAV we track every hover position at which it
    can be the newest link of a chain that covers [0, its right edge] with
    nondecreasing positions. These sets are finite unions of intervals, so
    the check is exact rather than a one-shot greedy.
    """
    beta = fleet.beta
    slots = []
    for i, u in enumerate(fleet.uavs):
        iv = reachable_interval(u, budget)
        if iv is not None:
            slots.append((u.x0, iv[1] + u.r, i, iv))
    slots.sort(key=lambda s: (s[0], s[1]))

    raw: list[list[_Piece]] = []
    merged: list[list[tuple[float, float]]] = []
    goal = None
    for k, (_, _, i, (lo, hi)) in enumerate(slots):
        r = fleet.uavs[i].r
        pieces: list[_Piece] = []
        if lo <= min(hi, r) + _EPS:
            pieces.append(_Piece(lo, min(hi, r), None))
        for kp in range(k):
            rp = fleet.uavs[slots[kp][2]].r
            c1 = max(0.0, rp - r)   # y <= x and y + rp <= x + r
            c2 = rp + r             # x - r <= y + rp
            for m, (a, b) in enumerate(merged[kp]):
                ya, yb = max(a, lo - c2), min(b, hi - c1)
                if ya > yb + _EPS:
                    continue
                xa, xb = max(lo, ya + c1), min(hi, yb + c2)
                if xa <= xb + _EPS:
                    pieces.append(_Piece(xa, max(xa, xb), (kp, m)))
        raw.append(pieces)
        merged.append(_merge(pieces))
        if merged[-1] and merged[-1][-1][1] + r >= beta - _EPS * max(1.0, beta):
            goal = k
            break
    if goal is None:
        return None

    positions: list[Optional[float]] = [None] * fleet.n
    k = goal
    i = slots[k][2]
    u = fleet.uavs[i]
    # final link: reach beta, stay as close to home as the pieces allow
    cands = [(p, _clamp(u.x0, max(p.lo, beta - u.r), p.hi)) for p in raw[k]
             if p.hi + u.r >= beta - _EPS * max(1.0, beta)]
    piece, x = min(cands, key=lambda c: deployment_energy(u, c[1]))
    while True:
        positions[i] = x
        if piece.parent is None:
            break
        kp, m = piece.parent
        ip = slots[kp][2]
        up = fleet.uavs[ip]
        c1 = max(0.0, up.r - u.r)
        c2 = up.r + u.r
        a, b = merged[kp][m]
        ylo, yhi = max(a, x - c2), min(b, x - c1)
        y = _clamp(up.x0, ylo, max(ylo, yhi))
        inside = [p for p in raw[kp] if p.lo - 1e-9 <= y <= p.hi + 1e-9]
        piece = min(inside, key=lambda p: max(p.lo - y, y - p.hi, 0.0))
        y = _clamp(y, piece.lo, piece.hi)
        k, i, u, x = kp, ip, up, y
    return Deployment.from_positions(fleet, positions)


def minmax_general(fleet: Fleet, epsilon: float = 0.05) -> Deployment:
    """(1 + epsilon)-approximate order-preserving min-max deployment.

    Bisects the energy budget against :func:`minmax_feasible`. The lower
    bracket starts at the cheapest pure climb, which no covering deployment
    can undercut.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if fleet.total_width < fleet.beta * (1 - 1e-12):
        raise InfeasibleError(f"total footprint {fleet.total_width} is shorter than beta={fleet.beta}")
    e_hi = max(max(deployment_energy(u, 0.0), deployment_energy(u, fleet.beta)) for u in fleet.uavs)
    best = minmax_feasible(fleet, e_hi)
    if best is None:
        raise InfeasibleError("no order-preserving covering deployment exists")
    lo = min(u.rate * u.h for u in fleet.uavs) * (1 - 1e-9)
    hi = e_hi
    while hi - lo > max(epsilon * lo, 1e-9):
        mid = 0.5 * (lo + hi)
        dep = minmax_feasible(fleet, mid)
        if dep is None:
            lo = mid
        else:
            hi, best = mid, dep
    return drop_redundant(fleet, best)

