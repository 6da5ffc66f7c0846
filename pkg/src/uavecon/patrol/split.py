"""Split one postman tour into k depot-anchored routes of similar length."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .cpp import Tour
from .graph import CellGraph


@dataclass(frozen=True)
class SplitResult:
    routes: tuple[Tour, ...]
    cuts: tuple[int, ...]  # tour step indices bounding the segments, 0 ... len(steps)

    @property
    def max_length(self) -> float:
        return max(r.length for r in self.routes)

    def segments(self, tour: Tour) -> list[tuple]:
        return [tour.steps[a:b] for a, b in zip(self.cuts, self.cuts[1:])]

    def to_dict(self) -> dict:
        return {"k": len(self.routes), "cuts": list(self.cuts), "max_length": self.max_length,
                "routes": [r.to_dict() for r in self.routes]}


def split_k_tours(tour: Tour, g: CellGraph, k: int) -> SplitResult:
    """Cut the tour at the vertices nearest arc positions j*length/k, close each piece at the depot."""
    m = len(tour.steps)
    if k < 1 or k > m:
        raise ValueError(f"k must lie in [1, {m}], got {k}")
    arc = [0.0]
    for s in tour.steps:
        arc.append(arc[-1] + g.edges[s.edge][2])
    cuts = [0]
    for j in range(1, k):
        target = j * tour.length / k
        # keep at least one step for each remaining segment
        lo, hi = cuts[-1] + 1, m - (k - j)
        cuts.append(min(range(lo, hi + 1), key=lambda t: (abs(arc[t] - target), t)))
    cuts.append(m)

    depot = g.depot
    routes = []
    for a, b in zip(cuts, cuts[1:]):
        seg = list(tour.steps[a:b])
        head = g.shortest_path(depot, seg[0].u) if seg[0].u != depot else []
        tail = g.shortest_path(seg[-1].v, depot) if seg[-1].v != depot else []
        steps = head + seg + tail
        routes.append(Tour(tuple(steps), math.fsum(g.edges[s.edge][2] for s in steps)))
    return SplitResult(tuple(routes), tuple(cuts))
