"""Exact shortest closed covering walk by search over (vertex, covered-edge set)."""
from __future__ import annotations

import heapq
import math

from .graph import CellGraph

MAX_ORACLE_EDGES = 12


def min_covering_walk_length(g: CellGraph, start: int | None = None) -> float:
    m = len(g.edges)
    if m > MAX_ORACLE_EDGES:
        raise ValueError(f"oracle handles at most {MAX_ORACLE_EDGES} edges")
    start = g.depot if start is None else start
    full = (1 << m) - 1
    best = {(start, 0): 0.0}
    heap = [(0.0, start, 0)]
    while heap:
        d, u, mask = heapq.heappop(heap)
        if mask == full and u == start:
            return d
        if d > best.get((u, mask), math.inf):
            continue
        for v, w, e in g.adjacency[u]:
            key = (v, mask | 1 << e)
            nd = d + w
            if nd < best.get(key, math.inf) - 1e-15:
                best[key] = nd
                heapq.heappush(heap, (nd, v, key[1]))
    raise ValueError("no closed covering walk exists (graph disconnected?)")
