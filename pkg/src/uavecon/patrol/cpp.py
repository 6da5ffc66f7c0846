"""Chinese Postman tours: odd-vertex matching, virtual duplicates, Euler circuit."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .graph import CellGraph, Step

MAX_ODD_VERTICES = 16


@dataclass(frozen=True)
class Tour:
    steps: tuple[Step, ...]
    length: float

    @property
    def start(self) -> int:
        return self.steps[0].u

    def vertex_sequence(self) -> list[int]:
        if not self.steps:
            return []
        return [self.steps[0].u] + [s.v for s in self.steps]

    def edge_counts(self) -> Counter:
        return Counter(s.edge for s in self.steps)

    def is_closed(self) -> bool:
        if not self.steps:
            return True
        continuous = all(a.v == b.u for a, b in zip(self.steps, self.steps[1:]))
        return continuous and self.steps[-1].v == self.steps[0].u

    def to_dict(self) -> dict:
        return {"vertices": self.vertex_sequence(), "edges": [s.edge for s in self.steps],
                "length": self.length}

    @classmethod
    def from_steps(cls, g: CellGraph, steps) -> "Tour":
        steps = tuple(steps)
        return cls(steps, math.fsum(g.edges[s.edge][2] for s in steps))


def min_weight_perfect_matching(nodes: list[int], dist: dict[tuple[int, int], float]) -> list[tuple[int, int]]:
    """Exact matching by DP over subsets; fine up to ~16 nodes."""
    m = len(nodes)
    if m % 2:
        raise ValueError("perfect matching needs an even number of nodes")

    @lru_cache(maxsize=None)
    def best(mask: int) -> tuple[float, tuple]:
        if mask == 0:
            return 0.0, ()
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        out = (math.inf, ())
        j_mask = rest
        while j_mask:
            j = (j_mask & -j_mask).bit_length() - 1
            j_mask &= j_mask - 1
            sub, pairs = best(rest & ~(1 << j))
            w = dist[nodes[i], nodes[j]] + sub
            if w < out[0]:
                out = (w, ((nodes[i], nodes[j]),) + pairs)
        return out

    result = list(best((1 << m) - 1)[1])
    best.cache_clear()
    return result


def euler_circuit(n_vertices: int, steps: list[Step], start: int) -> list[Step]:
    """Hierholzer's algorithm over a multiset of undirected edge copies."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_vertices)]
    for k, s in enumerate(steps):
        adj[s.u].append((s.v, k))
        adj[s.v].append((s.u, k))
    used = [False] * len(steps)
    ptr = [0] * n_vertices
    stack: list[tuple[int, int]] = [(start, -1)]
    out: list[tuple[int, int, int]] = []
    while stack:
        u, via = stack[-1]
        while ptr[u] < len(adj[u]) and used[adj[u][ptr[u]][1]]:
            ptr[u] += 1
        if ptr[u] == len(adj[u]):
            stack.pop()
            if via >= 0:
                out.append((stack[-1][0], u, via))
        else:
            v, k = adj[u][ptr[u]]
            used[k] = True
            stack.append((v, k))
    if not all(used):
        raise ValueError("edge multiset is not connected")
    out.reverse()
    return [Step(a, b, steps[k].edge) for a, b, k in out]


def cpp_tour(g: CellGraph) -> Tour:
    """Shortest closed walk from the depot that traverses every edge at least once."""
    if not g.edges:
        raise ValueError("graph has no edges")
    if not g.is_connected():
        raise ValueError("graph is disconnected")
    odd = g.odd_vertices()
    if len(odd) > MAX_ODD_VERTICES:
        raise ValueError(f"{len(odd)} odd vertices exceeds the matching cap of {MAX_ODD_VERTICES}")
    dist: dict[tuple[int, int], float] = {}
    preds = {}
    for a in odd:
        d, pred = g.dijkstra(a)
        preds[a] = pred
        for b in odd:
            dist[a, b] = d[b]
    multiset = [Step(a, b, e) for e, (a, b, _) in enumerate(g.edges)]
    for a, b in min_weight_perfect_matching(odd, dist):
        # duplicate the shortest a-b path as virtual edges of the same length
        cur = b
        while cur != a:
            step = preds[a][cur]
            multiset.append(step)
            cur = step.u
    return Tour.from_steps(g, euler_circuit(len(g.vertices), multiset, g.depot))
