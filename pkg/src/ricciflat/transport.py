"""Exact Wasserstein-1 distance between finitely supported measures on a graph.

The primal problem is solved as an integer transportation problem (masses scaled
by the lcm of their denominators) with successive shortest augmenting paths. A
dual 1-Lipschitz potential is read off the final residual network and then
c-transformed so that it is defined on every vertex of both supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from ricciflat.graph import INF, Graph, GraphError


class TransportError(ValueError):
    """Invalid marginals, couplings or unreachable supports."""


def as_fraction(value: Fraction | int | str) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Distribution:
    """Probability measure with rational masses on finitely many vertices."""

    items: tuple[tuple[int, Fraction], ...]

    def __init__(self, masses: Mapping[int, Fraction | int | str] | Iterable[tuple[int, Fraction]]):
        pairs = masses.items() if isinstance(masses, Mapping) else masses
        merged: dict[int, Fraction] = {}
        for v, m in pairs:
            merged[v] = merged.get(v, Fraction(0)) + as_fraction(m)
        for v, m in merged.items():
            if m < 0:
                raise TransportError(f"negative mass {m} at vertex {v}")
        items = tuple(sorted((v, m) for v, m in merged.items() if m != 0))
        if not items:
            raise TransportError("distribution has empty support")
        total = sum((m for _, m in items), Fraction(0))
        if total != 1:
            raise TransportError(f"masses sum to {total}, not 1")
        object.__setattr__(self, "items", items)

    @classmethod
    def dirac(cls, v: int) -> "Distribution":
        return cls({v: Fraction(1)})

    @property
    def support(self) -> list[int]:
        return [v for v, _ in self.items]

    def mass(self, v: int) -> Fraction:
        for w, m in self.items:
            if w == v:
                return m
        return Fraction(0)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.items)


@dataclass(frozen=True)
class Coupling:
    entries: dict[tuple[int, int], Fraction]

    def sorted_entries(self) -> list[tuple[int, int, Fraction]]:
        return [(a, b, m) for (a, b), m in sorted(self.entries.items())]


@dataclass(frozen=True)
class Potential:
    values: dict[int, Fraction]

    def __getitem__(self, v: int) -> Fraction:
        return self.values[v]


@dataclass(frozen=True)
class TransportResult:
    value: Fraction
    primal: Coupling
    dual: Potential


def verify_coupling(g: Graph, mu1: Distribution, mu2: Distribution, coupling: Coupling | Mapping) -> Fraction:
    """Check both marginal constraints exactly and return the transport cost."""
    entries = coupling.entries if isinstance(coupling, Coupling) else dict(coupling)
    rows: dict[int, Fraction] = {}
    cols: dict[int, Fraction] = {}
    cost = Fraction(0)
    for (a, b), m in entries.items():
        m = as_fraction(m)
        if m < 0:
            raise TransportError(f"negative coupling mass at ({a}, {b})")
        if m == 0:
            continue
        d = g.bfs(a)[b]
        if d == INF:
            raise TransportError(f"vertices {a} and {b} are not connected")
        rows[a] = rows.get(a, Fraction(0)) + m
        cols[b] = cols.get(b, Fraction(0)) + m
        cost += m * int(d)
    want1, want2 = mu1.as_dict(), mu2.as_dict()
    for v in sorted(set(rows) | set(want1)):
        if rows.get(v, Fraction(0)) != want1.get(v, Fraction(0)):
            raise TransportError(f"row sum at vertex {v} is {rows.get(v, 0)}, expected {want1.get(v, 0)}")
    for v in sorted(set(cols) | set(want2)):
        if cols.get(v, Fraction(0)) != want2.get(v, Fraction(0)):
            raise TransportError(f"column sum at vertex {v} is {cols.get(v, 0)}, expected {want2.get(v, 0)}")
    return cost


def verify_lipschitz(g: Graph, f: Potential | Mapping[int, Fraction], domain: Iterable[int]) -> bool:
    values = f.values if isinstance(f, Potential) else f
    dom = list(domain)
    for a in dom:
        dist = g.bfs(a)
        fa = values[a]
        for b in dom:
            if fa - values[b] > dist[b]:
                return False
    return True


def dual_objective(f: Potential | Mapping[int, Fraction], mu1: Distribution, mu2: Distribution) -> Fraction:
    values = f.values if isinstance(f, Potential) else f
    total = Fraction(0)
    for v, m in mu1.items:
        if v not in values:
            raise TransportError(f"potential undefined at support vertex {v}")
        total += values[v] * m
    for v, m in mu2.items:
        if v not in values:
            raise TransportError(f"potential undefined at support vertex {v}")
        total -= values[v] * m
    return total


def _integer_masses(mu1: Distribution, mu2: Distribution) -> tuple[int, list[int], list[int]]:
    scale = 1
    for _, m in mu1.items + mu2.items:
        scale = math.lcm(scale, m.denominator)
    a = [int(m * scale) for _, m in mu1.items]
    b = [int(m * scale) for _, m in mu2.items]
    return scale, a, b


def _min_cost_flow(cost: list[list[int]], supply: list[int], demand: list[int]) -> list[list[int]]:
    """Successive shortest paths on the bipartite transportation network.

    Nodes: 0 = super source, 1..m sources, m+1..m+k sinks, m+k+1 = super sink.
    Bellman-Ford handles the negative reverse arcs; the network has at most a few
    dozen arcs so no potentials/Dijkstra are needed.
    """
    m, k = len(supply), len(demand)
    flow = [[0] * k for _ in range(m)]
    sent = [0] * m
    recv = [0] * k
    total = sum(supply)
    moved = 0
    while moved < total:
        # distance labels over sources and sinks, reached from the super source
        dist_s = [0 if sent[i] < supply[i] else None for i in range(m)]
        dist_t: list[int | None] = [None] * k
        pred_t = [-1] * k
        pred_s: list[int] = [-1] * m  # sink index used to reach a source backwards
        changed = True
        while changed:
            changed = False
            for i in range(m):
                di = dist_s[i]
                if di is None:
                    continue
                row = cost[i]
                for j in range(k):
                    nd = di + row[j]
                    dj = dist_t[j]
                    if dj is None or nd < dj:
                        dist_t[j] = nd
                        pred_t[j] = i
                        changed = True
            for j in range(k):
                dj = dist_t[j]
                if dj is None:
                    continue
                for i in range(m):
                    if flow[i][j] > 0:
                        nd = dj - cost[i][j]
                        di = dist_s[i]
                        if di is None or nd < di:
                            dist_s[i] = nd
                            pred_s[i] = j
                            changed = True
        target = -1
        for j in range(k):
            if recv[j] < demand[j] and dist_t[j] is not None:
                if target < 0 or dist_t[j] < dist_t[target]:  # type: ignore[operator]
                    target = j
        if target < 0:
            raise TransportError("no augmenting path; marginals are inconsistent")
        # walk back to an origin source with spare supply
        path: list[tuple[int, int, int]] = []  # (source, sink, +1 forward / -1 backward)
        j = target
        bottleneck = demand[j] - recv[j]
        while True:
            i = pred_t[j]
            path.append((i, j, 1))
            if pred_s[i] < 0:
                bottleneck = min(bottleneck, supply[i] - sent[i])
                break
            jj = pred_s[i]
            path.append((i, jj, -1))
            bottleneck = min(bottleneck, flow[i][jj])
            j = jj
        origin = path[-1][0] if path[-1][2] == 1 else None
        for i, jj, sign in path:
            flow[i][jj] += sign * bottleneck
        assert origin is not None
        sent[origin] += bottleneck
        recv[target] += bottleneck
        moved += bottleneck
    return flow


def _node_potentials(cost: list[list[int]], flow: list[list[int]]) -> tuple[list[int], list[int]]:
    """Shortest-path labels on the residual bipartite graph from a virtual root.

    Returns (phi, psi) with phi_i - psi_j <= c_ij everywhere and equality on arcs
    carrying flow.
    """
    m, k = len(cost), len(cost[0])
    ds = [0] * m
    dt = [0] * k
    for _ in range(m + k + 1):
        changed = False
        for i in range(m):
            for j in range(k):
                if ds[i] + cost[i][j] < dt[j]:
                    dt[j] = ds[i] + cost[i][j]
                    changed = True
                if flow[i][j] > 0 and dt[j] - cost[i][j] < ds[i]:
                    ds[i] = dt[j] - cost[i][j]
                    changed = True
        if not changed:
            break
    else:
        raise TransportError("negative cycle in residual network; flow is not optimal")
    return [-x for x in ds], [-x for x in dt]


def wasserstein(g: Graph, mu1: Distribution, mu2: Distribution) -> TransportResult:
    sources, sinks = mu1.support, mu2.support
    for v in sources + sinks:
        if not 0 <= v < g.n:
            raise GraphError(f"support vertex {v} outside the graph")
    cost: list[list[int]] = []
    for s in sources:
        dist = g.bfs(s)
        row = []
        for t in sinks:
            d = dist[t]
            if d == INF:
                raise TransportError(f"support vertices {s} and {t} are disconnected")
            row.append(int(d))
        cost.append(row)
    scale, supply, demand = _integer_masses(mu1, mu2)
    flow = _min_cost_flow(cost, supply, demand)
    total = sum(flow[i][j] * cost[i][j] for i in range(len(sources)) for j in range(len(sinks)))
    value = Fraction(total, scale)
    entries = {
        (sources[i], sinks[j]): Fraction(flow[i][j], scale)
        for i in range(len(sources))
        for j in range(len(sinks))
        if flow[i][j] > 0
    }
    _, psi = _node_potentials(cost, flow)
    # c-transform of psi: 1-Lipschitz on the whole graph, >= phi on sources, <= psi on sinks
    domain = sorted(set(sources) | set(sinks))
    sink_dists = [g.bfs(t) for t in sinks]
    raw = {z: min(psi[j] + int(sink_dists[j][z]) for j in range(len(sinks))) for z in domain}
    shift = raw[sinks[0]]
    values = {z: Fraction(raw[z] - shift) for z in domain}
    return TransportResult(value, Coupling(entries), Potential(values))
