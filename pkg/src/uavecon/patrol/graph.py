"""Undirected weighted cell-edge graphs and the hexagonal lattice builder."""
from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field
from typing import Optional


@dataclass(frozen=True)
class Step:
    """One directed traversal of edge ``edge`` from ``u`` to ``v``."""

    u: int
    v: int
    edge: int


@dataclass
class CellGraph:
    vertices: list[tuple[float, float]]
    edges: list[tuple[int, int, float]]
    depot: Optional[int] = None
    _adj: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.vertices = [(float(x), float(y)) for x, y in self.vertices]
        self.edges = [(int(a), int(b), float(w)) for a, b, w in self.edges]
        nv = len(self.vertices)
        if nv == 0:
            raise ValueError("graph has no vertices")
        for a, b, w in self.edges:
            if not (0 <= a < nv and 0 <= b < nv):
                raise ValueError(f"edge ({a}, {b}) references a missing vertex")
            if a == b:
                raise ValueError("self-loops are not allowed")
            if not w > 0:
                raise ValueError("edge lengths must be positive")
        if self.depot is None:
            self.depot = min(range(nv), key=lambda i: self.vertices[i])
        elif not 0 <= self.depot < nv:
            raise ValueError("depot is not a vertex")

    @property
    def adjacency(self) -> dict[int, list[tuple[int, float, int]]]:
        if self._adj is None:
            adj: dict[int, list[tuple[int, float, int]]] = {i: [] for i in range(len(self.vertices))}
            for e, (a, b, w) in enumerate(self.edges):
                adj[a].append((b, w, e))
                adj[b].append((a, w, e))
            self._adj = adj
        return self._adj

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def odd_vertices(self) -> list[int]:
        return [u for u in range(len(self.vertices)) if self.degree(u) % 2]

    @property
    def total_length(self) -> float:
        return math.fsum(w for _, _, w in self.edges)

    def is_connected(self) -> bool:
        seen = {self.depot}
        stack = [self.depot]
        while stack:
            u = stack.pop()
            for v, _, _ in self.adjacency[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.vertices)

    def dijkstra(self, source: int) -> tuple[list[float], list[Optional[Step]]]:
        """Distances from ``source`` and the last step on a shortest path to each vertex."""
        dist = [math.inf] * len(self.vertices)
        pred: list[Optional[Step]] = [None] * len(self.vertices)
        dist[source] = 0.0
        heap = [(0.0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for v, w, e in self.adjacency[u]:
                nd = d + w
                if nd < dist[v] - 1e-15:
                    dist[v] = nd
                    pred[v] = Step(u, v, e)
                    heapq.heappush(heap, (nd, v))
        return dist, pred

    def shortest_path(self, a: int, b: int) -> list[Step]:
        _, pred = self.dijkstra(a)
        path: list[Step] = []
        cur = b
        while cur != a:
            step = pred[cur]
            if step is None:
                raise ValueError(f"no path from {a} to {b}")
            path.append(step)
            cur = step.u
        path.reverse()
        return path

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": i, "x": x, "y": y} for i, (x, y) in enumerate(self.vertices)],
            "edges": [{"u": a, "v": b, "length": w} for a, b, w in self.edges],
            "depot": self.depot,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CellGraph":
        verts = sorted(d["vertices"], key=lambda v: v["id"])
        return cls([(v["x"], v["y"]) for v in verts],
                   [(e["u"], e["v"], e["length"]) for e in d["edges"]], d.get("depot"))


def load_graph(path) -> CellGraph:
    with open(path, encoding="utf-8") as fh:
        return CellGraph.from_dict(json.load(fh))


def build_cell_graph(rows: int, cols: int, side: float = 1.0) -> CellGraph:
    """Pointy-top hexagonal cells in offset rows; shared borders appear once.

    Odd rows are shifted right by half a cell width, so cells in neighbouring
    rows overlap on a shared edge.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    if not side > 0:
        raise ValueError("side must be positive")
    width = math.sqrt(3) * side
    corners = [(side * math.cos(math.radians(30 + 60 * k)), side * math.sin(math.radians(30 + 60 * k)))
               for k in range(6)]
    index: dict[tuple[int, int], int] = {}
    verts: list[tuple[float, float]] = []
    edges: set[tuple[int, int]] = set()

    def vid(x: float, y: float) -> int:
        key = (round(x * 1e9), round(y * 1e9))
        if key not in index:
            index[key] = len(verts)
            verts.append((x, y))
        return index[key]

    for r in range(rows):
        for c in range(cols):
            cx = c * width + (width / 2 if r % 2 else 0.0)
            cy = r * 1.5 * side
            ring = [vid(cx + dx, cy + dy) for dx, dy in corners]
            for k in range(6):
                a, b = ring[k], ring[(k + 1) % 6]
                edges.add((min(a, b), max(a, b)))
    return CellGraph(verts, [(a, b, side) for a, b in sorted(edges)])
