"""Infinite, locally finite digraphs explored on demand.

A graph hands out finite neighbour lists for byte-string vertex keys; the
BFS here turns that into exact spheres around the root. Distances are always
undirected: an arc in either direction makes two vertices adjacent.
"""

from __future__ import annotations

import json
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Sequence

__all__ = [
    "VertexKey",
    "LazyRootedDigraph",
    "Rerooted",
    "SphereTable",
    "LocalParams",
    "EndProfile",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "default_budget",
    "expand",
    "distance",
    "local_params",
    "end_profile",
    "check_sphere_bound",
]

VertexKey = bytes

DEFAULT_BUDGET = 5_000_000


def default_budget() -> int:
    env = os.environ.get("ORBGROWTH_BUDGET")
    if env:
        return int(env)
    return DEFAULT_BUDGET


class LazyRootedDigraph(ABC):
    """Rooted, locally finite digraph whose vertices are generated on demand.

    Subclasses must return neighbour lists in a fixed order for each vertex,
    and ``u in out_neighbors(v)`` must hold exactly when ``v in in_neighbors(u)``.
    """

    root: VertexKey
    descriptor: str = ""

    @abstractmethod
    def out_neighbors(self, v: VertexKey) -> list[VertexKey]: ...

    @abstractmethod
    def in_neighbors(self, v: VertexKey) -> list[VertexKey]: ...

    def neighbors(self, v: VertexKey) -> list[VertexKey]:
        """Undirected neighbourhood, sorted."""
        return sorted(set(self.out_neighbors(v)) | set(self.in_neighbors(v)))

    def root_distance(self, v: VertexKey) -> int | None:
        """Distance from the root when the construction knows it in closed form."""
        return None

    def reroot(self, v: VertexKey) -> LazyRootedDigraph:
        return Rerooted(self, v)

    def __repr__(self):
        return f"<{type(self).__name__} {self.descriptor}>"


class Rerooted(LazyRootedDigraph):
    """Same digraph, different root."""

    def __init__(self, graph: LazyRootedDigraph, root: VertexKey):
        self.graph = graph
        self.root = root
        self.descriptor = f"reroot({graph.descriptor}, {root.hex()})"

    def out_neighbors(self, v):
        return self.graph.out_neighbors(v)

    def in_neighbors(self, v):
        return self.graph.in_neighbors(v)

    def neighbors(self, v):
        return self.graph.neighbors(v)


@dataclass
class SphereTable:
    root: VertexKey
    spheres: list[list[VertexKey]]
    dist: dict
    parent: dict
    descriptor: str = ""

    @property
    def radius(self) -> int:
        return len(self.spheres) - 1

    def sizes(self) -> list[int]:
        return [len(s) for s in self.spheres]

    def ball_sizes(self) -> list[int]:
        out, total = [], 0
        for s in self.spheres:
            total += len(s)
            out.append(total)
        return out

    def sphere(self, r: int) -> list[VertexKey]:
        return self.spheres[r]

    def to_csv(self) -> str:
        lines = ["r,s_r,b_r"]
        for r, (s, b) in enumerate(zip(self.sizes(), self.ball_sizes())):
            lines.append(f"{r},{s},{b}")
        return "\n".join(lines) + "\n"

    def to_json(self, vertices: bool = False) -> str:
        doc = {
            "descriptor": self.descriptor,
            "radius": self.radius,
            "s": self.sizes(),
            "b": self.ball_sizes(),
        }
        if vertices:
            doc["vertices"] = [
                {
                    "key": v.hex(),
                    "r": r,
                    "parent": None if self.parent[v] is None else self.parent[v].hex(),
                }
                for r, sphere in enumerate(self.spheres)
                for v in sphere
            ]
        return json.dumps(doc, indent=2) + "\n"


class BudgetExceeded(RuntimeError):
    """BFS visited more vertices than allowed; ``table`` holds the completed radii."""

    def __init__(self, table: SphereTable, budget: int):
        self.table = table
        self.budget = budget
        self.last_radius = table.radius
        super().__init__(
            f"vertex budget {budget} exceeded; last completed radius {table.radius}"
        )


def expand(
    graph: LazyRootedDigraph,
    radius: int,
    budget: int | None = None,
    root: VertexKey | None = None,
) -> SphereTable:
    """Exact BFS spheres around the root out to ``radius``.

    Each sphere is sorted by key; the recorded parent of a vertex is its first
    neighbour in the previous sphere under that order.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if budget is None:
        budget = default_budget()
    if root is None:
        root = graph.root
    dist = {root: 0}
    parent = {root: None}
    spheres = [[root]]
    neighbors = graph.neighbors
    for r in range(1, radius + 1):
        nxt = []
        for v in spheres[-1]:
            for w in neighbors(v):
                if w not in dist:
                    dist[w] = r
                    parent[w] = v
                    nxt.append(w)
            if len(dist) > budget:
                for w in nxt:
                    del dist[w], parent[w]
                partial = SphereTable(root, spheres, dist, parent, graph.descriptor)
                raise BudgetExceeded(partial, budget)
        if not nxt:
            break
        nxt.sort()
        spheres.append(nxt)
    return SphereTable(root, spheres, dist, parent, graph.descriptor)


def distance(graph: LazyRootedDigraph, u: VertexKey, v: VertexKey, cap: int) -> int | None:
    """Undirected distance by bidirectional BFS, or None when it exceeds ``cap``."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    if u == v:
        return 0
    seen_u, seen_v = {u: 0}, {v: 0}
    front_u, front_v = [u], [v]
    du = dv = 0
    while du + dv < cap and front_u and front_v:
        # grow the smaller side by one layer
        if len(front_u) <= len(front_v):
            seen, other, front = seen_u, seen_v, front_u
            du += 1
            depth = du
        else:
            seen, other, front = seen_v, seen_u, front_v
            dv += 1
            depth = dv
        nxt = []
        best = None
        for x in front:
            for y in graph.neighbors(x):
                if y not in seen:
                    seen[y] = depth
                    nxt.append(y)
                    if y in other:
                        d = depth + other[y]
                        if best is None or d < best:
                            best = d
        if best is not None:
            return best if best <= cap else None
        if front is front_u:
            front_u = nxt
        else:
            front_v = nxt
    return None


@dataclass(frozen=True)
class LocalParams:
    """Counts of root neighbours at distance r, r+1, r-1 from a vertex at distance r."""

    a: int
    b: int
    c: int


def local_params(graph: LazyRootedDigraph, table: SphereTable, gamma: VertexKey) -> LocalParams:
    if gamma not in table.dist:
        raise KeyError("vertex not in sphere table")
    r = table.dist[gamma]
    if r < 1:
        raise ValueError("local parameters need a vertex at distance >= 1")
    if table.radius < r + 1:
        raise ValueError(f"table radius {table.radius} < {r + 1}")
    a = b = c = 0
    for x in table.spheres[1]:
        d = distance(graph, x, gamma, r + 1)
        if d == r:
            a += 1
        elif d == r + 1:
            b += 1
        elif d == r - 1:
            c += 1
        else:
            raise AssertionError(f"neighbour of root at distance {d} from a vertex at {r}")
    return LocalParams(a, b, c)


@dataclass(frozen=True)
class EndProfile:
    r: int
    R: int
    components: int
    frontier_sizes: tuple[int, ...] = field(default=())


def end_profile(
    graph: LazyRootedDigraph,
    r: int,
    R: int,
    table: SphereTable | None = None,
    budget: int | None = None,
) -> EndProfile:
    """Components of B_R minus B_r that reach the sphere S_R.

    Finite pockets that never reach S_R are dropped; they cannot carry an end.
    """
    if not 0 <= r < R:
        raise ValueError("need 0 <= r < R")
    if table is None or table.radius < R:
        table = expand(graph, R, budget=budget)
    if table.radius < R:
        # graph exhausted before radius R
        return EndProfile(r, R, 0, ())
    index = {}
    for d in range(r + 1, R + 1):
        for v in table.spheres[d]:
            index[v] = len(index)
    parent = list(range(len(index)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v, i in index.items():
        for w in graph.neighbors(v):
            j = index.get(w)
            if j is not None:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    frontier: dict[int, int] = {}
    for v in table.spheres[R]:
        c = find(index[v])
        frontier[c] = frontier.get(c, 0) + 1
    sizes = tuple(sorted(frontier.values(), reverse=True))
    return EndProfile(r, R, len(sizes), sizes)


def check_sphere_bound(table: SphereTable | Sequence[int]) -> tuple[bool, int | None]:
    """Check s_r <= s_1 (s_1 - 1)^(r-1); returns (ok, first violating r)."""
    sizes = table.sizes() if isinstance(table, SphereTable) else list(table)
    if len(sizes) < 2:
        raise ValueError("need sphere sizes up to radius >= 1")
    s1 = sizes[1]
    for r in range(1, len(sizes)):
        if sizes[r] > s1 * (s1 - 1) ** (r - 1):
            return False, r
    return True, None
