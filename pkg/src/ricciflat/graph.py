"""Immutable simple graphs, BFS metric queries and short-cycle membership."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INF = math.inf


class GraphError(ValueError):
    """Raised for malformed graphs or invalid vertex/edge references."""


@dataclass(frozen=True, order=True)
class EdgeRef:
    u: int
    v: int

    def __post_init__(self) -> None:
        if not self.u < self.v:
            raise GraphError(f"edge endpoints must satisfy u < v, got ({self.u}, {self.v})")

    @classmethod
    def of(cls, a: int, b: int) -> "EdgeRef":
        return cls(min(a, b), max(a, b))

    def __iter__(self):
        yield self.u
        yield self.v


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with sorted adjacency lists.

    Equality is structural on (n, adjacency); the name is a label only.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    name: str | None = None
    _dist_cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0 or len(self.adjacency) != self.n:
            raise GraphError("adjacency must have exactly n rows")
        adj = tuple(tuple(row) for row in self.adjacency)
        object.__setattr__(self, "adjacency", adj)
        for v, row in enumerate(adj):
            for i, w in enumerate(row):
                if not 0 <= w < self.n:
                    raise GraphError(f"vertex {v} lists neighbor {w} outside 0..{self.n - 1}")
                if w == v:
                    raise GraphError(f"self-loop at vertex {v}")
                if i and row[i - 1] >= w:
                    raise GraphError(f"adjacency of {v} is not strictly ascending")
        for v, row in enumerate(adj):
            for w in row:
                if v not in adj[w]:
                    raise GraphError(f"asymmetric adjacency between {v} and {w}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], name: str | None = None) -> "Graph":
        rows: list[set[int]] = [set() for _ in range(n)]
        for a, b in edges:
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) has an endpoint outside 0..{n - 1}")
            if b in rows[a]:
                raise GraphError(f"duplicate edge ({min(a, b)}, {max(a, b)})")
            rows[a].add(b)
            rows[b].add(a)
        return cls(n, tuple(tuple(sorted(r)) for r in rows), name)

    @classmethod
    def from_adjacency_dict(cls, adj: dict[int, Iterable[int]], name: str | None = None) -> "Graph":
        """Build from a possibly one-sided neighbor map; vertices are 0..max id."""
        n = 1 + max([v for v in adj] + [w for ws in adj.values() for w in ws], default=-1)
        edges = {(min(v, w), max(v, w)) for v, ws in adj.items() for w in ws}
        return cls.from_edges(n, sorted(edges), name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.n, self.adjacency))

    def with_name(self, name: str | None) -> "Graph":
        return Graph(self.n, self.adjacency, name)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adjacency[a]

    def edges(self) -> list[EdgeRef]:
        return [EdgeRef(v, w) for v in range(self.n) for w in self.adjacency[v] if v < w]

    @property
    def num_edges(self) -> int:
        return sum(len(r) for r in self.adjacency) // 2

    def edge(self, a: int, b: int) -> EdgeRef:
        if not (0 <= a < self.n and 0 <= b < self.n) or not self.has_edge(a, b):
            raise GraphError(f"({a}, {b}) is not an edge")
        return EdgeRef.of(a, b)

    def bfs(self, source: int) -> tuple[float, ...]:
        """Distances from source to every vertex (INF when unreachable); cached."""
        cached = self._dist_cache.get(source)
        if cached is not None:
            return cached
        dist: list[float] = [INF] * self.n
        dist[source] = 0
        queue = deque([source])
        adj = self.adjacency
        while queue:
            v = queue.popleft()
            nd = dist[v] + 1
            for w in adj[v]:
                if dist[w] == INF:
                    dist[w] = nd
                    queue.append(w)
        result = tuple(dist)
        self._dist_cache[source] = result
        return result

    def relabel(self, perm: Sequence[int], name: str | None = None) -> "Graph":
        """Graph whose vertex perm[v] plays the role of v."""
        return Graph.from_edges(self.n, [(perm[e.u], perm[e.v]) for e in self.edges()], name)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        edges = [(index[e.u], index[e.v]) for e in self.edges() if e.u in index and e.v in index]
        return Graph.from_edges(len(vertices), edges)


def degree(g: Graph, v: int) -> int:
    return g.degree(v)


def distance(g: Graph, u: int, v: int) -> float:
    return g.bfs(u)[v]


def distance_matrix_restricted(g: Graph, support: Sequence[int]) -> list[list[float]]:
    return [[g.bfs(a)[b] for b in support] for a in support]


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return True
    return all(d != INF for d in g.bfs(0))


def min_degree(g: Graph) -> int:
    return min((g.degree(v) for v in range(g.n)), default=0)


def max_degree(g: Graph) -> int:
    return max((g.degree(v) for v in range(g.n)), default=0)


def girth(g: Graph) -> float:
    best = INF
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in g.adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    parent[w] = v
                    queue.append(w)
                elif parent[v] != w:
                    best = min(best, dist[v] + dist[w] + 1)
    return best


def cycle_paths(g: Graph, e: EdgeRef, k: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """Vertex sequences of k-cycles through edge e, each starting at e.u and ending at e.v.

    Each cycle is listed once: a k-cycle through u-v corresponds to exactly one simple
    path of length k-1 from u to v that avoids the direct edge.
    """
    u, v = e.u, e.v
    adj = g.adjacency
    found: list[tuple[int, ...]] = []
    path = [u]
    on_path = {u}

    def extend(depth: int) -> bool:
        last = path[-1]
        if depth == k - 1:
            return False
        for w in adj[last]:
            if w in on_path:
                continue
            if w == v:
                if depth == k - 2:
                    found.append(tuple(path) + (v,))
                    if limit is not None and len(found) >= limit:
                        return True
                continue
            if depth == k - 2:
                continue
            path.append(w)
            on_path.add(w)
            stop = extend(depth + 1)
            path.pop()
            on_path.discard(w)
            if stop:
                return True
        return False

    # the first step may not use v directly, otherwise the path is the edge itself
    for w in adj[u]:
        if w == v:
            continue
        path.append(w)
        on_path.add(w)
        stop = extend(1)
        path.pop()
        on_path.discard(w)
        if stop:
            break
    return found


def count_cycles_through(g: Graph, e: EdgeRef, k: int) -> int:
    return len(cycle_paths(g, e, k))


@dataclass(frozen=True)
class CycleFlags:
    in_c3: bool
    in_c4: bool
    in_c5: bool
    witnesses: dict[int, tuple[int, ...]]

    def any_short(self) -> bool:
        return self.in_c3 or self.in_c4 or self.in_c5


def cycle_membership(g: Graph, e: EdgeRef) -> CycleFlags:
    if not g.has_edge(e.u, e.v):
        raise GraphError(f"({e.u}, {e.v}) is not an edge")
    witnesses: dict[int, tuple[int, ...]] = {}
    for k in (3, 4, 5):
        paths = cycle_paths(g, e, k, limit=1)
        if paths:
            witnesses[k] = paths[0]
    return CycleFlags(3 in witnesses, 4 in witnesses, 5 in witnesses, witnesses)
