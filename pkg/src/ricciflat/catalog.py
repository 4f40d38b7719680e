"""Named Ricci-flat graphs, periodic flat families, finite quotients and certified patches.

Graphs reconstructed from written case analyses carry their original vertex
labels, so vertex i here is the vertex called i in that analysis.

Periodic families are described by an implicit neighbour function on hashable
vertex keys. A finite quotient wraps the period; an infinite patch is the ball
of a given radius around a base edge, with the vertices whose neighbour lists
were cut off marked as boundary.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable

from ricciflat.curvature import lly_curvature
from ricciflat.graph import EdgeRef, Graph, GraphError

PATCH_MARGIN = 6


class CatalogError(ValueError):
    pass


def _from_adj(adj: dict[int, Iterable[int]], name: str) -> Graph:
    return Graph.from_adjacency_dict(adj, name)


def petersen() -> Graph:
    edges = [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, edges, "petersen")


def _lcf(n: int, jumps: list[int], name: str) -> Graph:
    edges = {(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)}
    for i in range(n):
        j = (i + jumps[i % len(jumps)]) % n
        edges.add((min(i, j), max(i, j)))
    return Graph.from_edges(n, sorted(edges), name)


def dodecahedral() -> Graph:
    return _lcf(20, [10, 7, 4, -4, -7, 10, -4, 7, -7, 4], "dodecahedral")


def line_graph(g: Graph, name: str | None = None) -> Graph:
    edges = g.edges()
    index = {(e.u, e.v): i for i, e in enumerate(edges)}
    out = set()
    for v in range(g.n):
        inc = sorted(index[(min(v, w), max(v, w))] for w in g.neighbors(v))
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                out.add((inc[a], inc[b]))
    return Graph.from_edges(len(edges), sorted(out), name)


def g7_icosidodecahedron() -> Graph:
    return line_graph(dodecahedral(), "g7_icosidodecahedron")


def half_dodecahedral() -> Graph:
    return _from_adj(
        {0: [1, 2, 3], 1: [4], 2: [5, 6], 3: [7], 4: [5, 8], 5: [12], 6: [7, 11], 7: [9], 8: [14],
         9: [10], 10: [11, 13], 11: [12], 12: [14], 13: [14]},
        "half_dodecahedral",
    )


def triplex() -> Graph:
    # the flat one of the two cubic girth-5 graphs on 12 vertices
    edges = [(0, 4), (0, 7), (0, 10), (1, 5), (1, 7), (1, 8), (2, 6), (2, 8), (2, 11), (3, 7), (3, 9),
             (3, 11), (4, 8), (4, 9), (5, 10), (5, 11), (6, 9), (6, 10)]
    return Graph.from_edges(12, edges, "triplex")


def g1() -> Graph:
    return _from_adj(
        {0: [1, 2, 3], 1: [4, 5, 6], 2: [4, 9, 10], 3: [7, 8], 5: [6, 7, 12], 6: [8, 11], 7: [9],
         8: [10], 9: [10, 12], 10: [11]},
        "g1",
    )


def g2() -> Graph:
    return _from_adj(
        {0: [1, 2, 3], 1: [4, 5, 6], 2: [4, 9, 10], 3: [7, 8], 7: [5, 9, 11], 8: [6, 10, 11], 11: [4]},
        "g2",
    )


def g3() -> Graph:
    return _from_adj(
        {0: [1, 2, 3], 1: [4, 5, 6], 2: [4, 9, 10], 3: [7, 8], 4: [11, 13], 5: [7, 14, 15],
         6: [8, 15, 16], 7: [9, 11], 8: [10, 11], 9: [14, 17], 10: [16, 17], 11: [12], 12: [13, 15, 17],
         13: [14, 16], 14: [19], 15: [18], 16: [19], 17: [18], 18: [19]},
        "g3",
    )


def g4() -> Graph:
    return _from_adj(
        {0: [1, 2, 3], 1: [4, 5, 6], 2: [4, 9, 10], 3: [7, 8], 4: [12, 13], 5: [7, 14, 15],
         6: [8, 15, 17], 7: [9, 11], 8: [10, 11], 9: [14, 16], 10: [16, 17], 11: [12, 13], 12: [14, 17],
         13: [15, 16], 14: [18], 15: [19], 16: [19], 17: [18], 18: [19]},
        "g4",
    )


def g5() -> Graph:
    return _from_adj(
        {0: [1, 2, 3, 4], 1: [2, 5, 6], 2: [8, 9], 3: [7], 4: [10], 5: [7], 6: [11], 7: [10, 11],
         8: [11], 9: [10], 10: [11]},
        "g5",
    )


def g6() -> Graph:
    return _from_adj(
        {0: [1, 2, 3, 4], 1: [2, 5, 6], 2: [8, 9], 3: [7, 10, 11], 4: [10], 5: [7, 12, 14], 6: [12],
         8: [11, 13, 14], 9: [13], 10: [12, 13], 12: [13]},
        "g6",
    )


def g8() -> Graph:
    return _from_adj(
        {0: [1, 2, 3, 4], 1: [5, 6, 7], 2: [5, 10, 11], 3: [8], 4: [9], 5: [12, 13], 6: [8], 7: [9],
         8: [10, 12], 9: [11, 13]},
        "g8",
    )


def figure32() -> Graph:
    return _from_adj(
        {0: [1, 2, 3, 4], 1: [5, 6, 7], 2: [5, 8, 10], 3: [6, 8, 11], 4: [9], 5: [9, 11], 6: [9, 10],
         7: [8], 8: [9]},
        "figure32",
    )


def type_c() -> Graph:
    """A 5-cycle whose every edge lies on its own 4-cycle, closed up 4-regularly."""
    return _from_adj(
        {0: [1, 4, 5, 14], 1: [2, 6, 7], 2: [3, 8, 9], 3: [4, 10, 11], 4: [12, 13],
         5: [6, 10, 19], 6: [11, 16], 7: [8, 12, 15], 8: [13, 17], 9: [10, 14, 16], 10: [18],
         11: [12, 17], 12: [19], 13: [14, 18], 14: [15], 15: [16, 19], 16: [17], 17: [18], 18: [19]},
        "type_c",
    )


NAMED: dict[str, Callable[[], Graph]] = {
    "petersen": petersen,
    "dodecahedral": dodecahedral,
    "half_dodecahedral": half_dodecahedral,
    "triplex": triplex,
    "g1": g1,
    "g2": g2,
    "g3": g3,
    "g4": g4,
    "g5": g5,
    "g6": g6,
    "g7_icosidodecahedron": g7_icosidodecahedron,
    "g8": g8,
    "figure32": figure32,
}


def named(name: str) -> Graph:
    try:
        return NAMED[name]()
    except KeyError:
        raise CatalogError(f"unknown named graph {name!r}; known: {', '.join(NAMED)}") from None


# ---------------------------------------------------------------- families

FAMILIES = ("c4_chain", "c4_grid_band", "c4c4_strip", "lattice4", "type_c")
GLUES = ("torus", "twist", "klein")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    params: dict[str, int | str] = field(default_factory=dict)
    mode: str = "quotient"
    radius: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise CatalogError(f"unknown family {self.family!r}; known: {', '.join(FAMILIES)}")
        if self.mode not in ("quotient", "patch"):
            raise CatalogError(f"mode must be 'quotient' or 'patch', got {self.mode!r}")
        if self.mode == "patch" and self.radius < 1:
            raise CatalogError("patch mode needs a positive radius")

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """Parse 'family=lattice4 length=6 width=6 glue=torus mode=quotient'."""
        fields: dict[str, str] = {}
        for token in text.split():
            if "=" not in token:
                raise CatalogError(f"expected key=value, got {token!r}")
            k, v = token.split("=", 1)
            if k in fields:
                raise CatalogError(f"repeated key {k!r}")
            fields[k] = v
        if "family" not in fields:
            raise CatalogError("family spec needs family=<id>")
        family = fields.pop("family")
        mode = fields.pop("mode", "quotient")
        radius = int(fields.pop("radius", "0"))
        params: dict[str, int | str] = {}
        for k, v in fields.items():
            params[k] = int(v) if v.lstrip("-").isdigit() else v
        return cls(family, params, mode, radius)

    def text(self) -> str:
        parts = [f"family={self.family}"] + [f"{k}={v}" for k, v in sorted(self.params.items())]
        parts.append(f"mode={self.mode}")
        if self.mode == "patch":
            parts.append(f"radius={self.radius}")
        return " ".join(parts)


@dataclass(frozen=True)
class Periodic:
    """Infinite graph given by a neighbour function, plus a base edge for patches."""

    neighbors: Callable[[Hashable], list]
    base: tuple[Hashable, Hashable]


@dataclass(frozen=True)
class Patch:
    graph: Graph
    boundary: frozenset[int]
    keys: tuple  # keys[i] is the periodic-graph vertex behind patch vertex i
    base_edge: EdgeRef


def _int_param(spec: FamilySpec, key: str, default: int | None = None) -> int:
    value = spec.params.get(key, default)
    if value is None:
        raise CatalogError(f"family {spec.family} needs parameter {key}")
    if not isinstance(value, int):
        raise CatalogError(f"parameter {key} must be an integer, got {value!r}")
    return value


def _check_params(spec: FamilySpec, allowed: set[str]) -> None:
    extra = set(spec.params) - allowed
    if extra:
        raise CatalogError(f"family {spec.family} does not take parameters {sorted(extra)}")


# c4_chain: hubs h_t of degree 4; consecutive hubs share two degree-2 neighbours a_t, b_t.
def _chain_neighbors(v):
    kind, t = v
    if kind == "h":
        return sorted([("a", t), ("b", t), ("a", t - 1), ("b", t - 1)])
    return sorted([("h", t), ("h", t + 1)])


def _chain_quotient(length: int) -> Graph:
    """Open chain of length + 1 four-cycles, closed by joining the last hub to the first hub's free pair."""
    hubs = length + 2
    # legality: the hubs whose neighbourhoods are merged must be at distance >= 3 in the open chain
    open_distance = 2 * (hubs - 1)
    if open_distance < 3:
        raise CatalogError(
            f"c4_chain length {length}: merged hubs h0 and h{hubs - 1} are at distance {open_distance} < 3"
        )
    index = {}
    for t in range(hubs):
        for kind in ("h", "a", "b"):
            index[(kind, t)] = len(index)
    edges = []
    for t in range(hubs):
        for kind in ("a", "b"):
            edges.append((index[("h", t)], index[(kind, t)]))
            edges.append((index[(kind, t)], index[("h", (t + 1) % hubs)]))
    return Graph.from_edges(len(index), edges, f"c4_chain(length={length})")


# c4c4_strip: pairs {(t,0),(t,1)}; every vertex of pair t is adjacent to both vertices of pairs t-1, t+1.
def _strip_neighbors(v):
    t, _ = v
    return [(t - 1, 0), (t - 1, 1), (t + 1, 0), (t + 1, 1)]


def _strip_quotient(length: int) -> Graph:
    # each edge needs a pair of neighbours at distance 3, which fails for fewer than 6 pairs
    if length < 6:
        raise CatalogError(f"c4c4_strip length {length} < 6: pairs t and t+3 would be closer than 3")
    edges = []
    for t in range(length):
        s = (t + 1) % length
        for i in (0, 1):
            for j in (0, 1):
                edges.append((2 * t + i, 2 * s + j))
    return Graph.from_edges(2 * length, edges, f"c4c4_strip(length={length})")


# lattice4: the square grid.
def _lattice_neighbors(v):
    i, j = v
    return [(i - 1, j), (i, j - 1), (i, j + 1), (i + 1, j)]


def _lattice_quotient(length: int, width: int, glue: str, shift: int) -> Graph:
    if length < 6 or width < 6:
        raise CatalogError(f"lattice4 needs length >= 6 and width >= 6, got {length} x {width}")
    if glue not in GLUES:
        raise CatalogError(f"unknown glue {glue!r}; known: {', '.join(GLUES)}")

    def vid(i: int, j: int) -> int:
        return i * width + j

    def wrap_row(j: int) -> int:
        if glue == "torus":
            return j
        if glue == "twist":
            return (j + shift) % width
        return width - 1 - j

    edges = set()
    for i in range(length):
        for j in range(width):
            a = vid(i, j)
            b = vid(i, (j + 1) % width)
            edges.add((min(a, b), max(a, b)))
            if i + 1 < length:
                c = vid(i + 1, j)
            else:
                c = vid(0, wrap_row(j))
            edges.add((min(a, c), max(a, c)))
    name = f"lattice4(length={length},width={width},glue={glue}" + (f",shift={shift})" if glue == "twist" else ")")
    return Graph.from_edges(length * width, sorted(edges), name)


# c4_grid_band: the square grid drawn diagonally and cut to a band of levels 0..length+1.
# Vertex (i, j) with i + j even; neighbours (i +- 1, j +- 1) inside the band. Boundary levels
# have degree 2, inner levels degree 4, and every diagonal column holds `length` 4-cycles.
# A quotient closes the band after `width` horizontal steps, either straight (cyclic) or
# with the levels reversed (mobius).
BAND_GLUES = ("cyclic", "mobius")
BAND_MIN_WIDTH = 6


def _band_periodic(length: int) -> Periodic:
    if length < 1:
        raise CatalogError(f"c4_grid_band needs length >= 1, got {length}")
    top = length + 1

    def neighbors(v):
        i, j = v
        return [(i + di, j + dj) for di in (-1, 1) for dj in (-1, 1) if 0 <= j + dj <= top]

    return Periodic(neighbors, ((0, 0), (1, 1)))


def _band_quotient(length: int, width: int, glue: str) -> Graph:
    if length < 1:
        raise CatalogError(f"c4_grid_band needs length >= 1, got {length}")
    if glue not in BAND_GLUES:
        raise CatalogError(f"unknown band glue {glue!r}; known: {', '.join(BAND_GLUES)}")
    top = length + 1
    if glue == "cyclic" and width % 2:
        raise CatalogError(f"cyclic c4_grid_band needs an even width, got {width}")
    if glue == "mobius" and (width + length) % 2 == 0:
        raise CatalogError(f"mobius c4_grid_band needs width + length odd, got {width} + {length}")
    if width < BAND_MIN_WIDTH:
        image = (width, 0) if glue == "cyclic" else (width, top)
        raise CatalogError(
            f"c4_grid_band width {width}: glued vertices (0, 0) and {image} are at distance {width} < {BAND_MIN_WIDTH}"
        )
    period = width if glue == "cyclic" else 2 * width

    def rep(i: int, j: int) -> tuple[int, int]:
        i %= period
        if glue == "mobius" and i >= width:
            i, j = i - width, top - j
        return i, j

    keys = sorted({rep(i, j) for i in range(period) for j in range(top + 1) if (i + j) % 2 == 0})
    index = {v: k for k, v in enumerate(keys)}
    edges = set()
    for i, j in keys:
        for di in (-1, 1):
            for dj in (-1, 1):
                if 0 <= j + dj <= top:
                    a, b = index[(i, j)], index[rep(i + di, j + dj)]
                    edges.add((min(a, b), max(a, b)))
    name = f"c4_grid_band(length={length},width={width},glue={glue})"
    return Graph.from_edges(len(keys), sorted(edges), name)


def _periodic(spec: FamilySpec) -> Periodic:
    if spec.family == "c4_chain":
        return Periodic(_chain_neighbors, (("h", 0), ("a", 0)))
    if spec.family == "c4c4_strip":
        return Periodic(_strip_neighbors, ((0, 0), (1, 0)))
    if spec.family == "lattice4":
        return Periodic(_lattice_neighbors, ((0, 0), (1, 0)))
    if spec.family == "c4_grid_band":
        length = _int_param(spec, "length")
        return _band_periodic(length)
    raise CatalogError(f"family {spec.family} is finite; it has no infinite patch")


def family(spec: FamilySpec) -> Graph | Patch:
    if spec.mode == "patch":
        allowed = {"length"} if spec.family == "c4_grid_band" else set()
        _check_params(spec, allowed)
        return build_patch(_periodic(spec), spec.radius, f"{spec.family} patch radius {spec.radius}")
    if spec.family == "c4_chain":
        _check_params(spec, {"length"})
        return _chain_quotient(_int_param(spec, "length", 1))
    if spec.family == "c4c4_strip":
        _check_params(spec, {"length"})
        return _strip_quotient(_int_param(spec, "length", 6))
    if spec.family == "lattice4":
        _check_params(spec, {"length", "width", "glue", "shift"})
        glue = spec.params.get("glue", "torus")
        if not isinstance(glue, str):
            raise CatalogError("glue must be a name")
        shift = _int_param(spec, "shift", 1 if glue == "twist" else 0)
        return _lattice_quotient(_int_param(spec, "length", 6), _int_param(spec, "width", 6), glue, shift)
    if spec.family == "c4_grid_band":
        _check_params(spec, {"length", "width", "glue"})
        glue = spec.params.get("glue", "cyclic")
        if not isinstance(glue, str):
            raise CatalogError("glue must be a name")
        return _band_quotient(_int_param(spec, "length"), _int_param(spec, "width"), glue)
    _check_params(spec, set())
    return type_c()


def build_patch(p: Periodic, radius: int, name: str | None = None) -> Patch:
    start = p.base[0]
    dist = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for w in p.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
    index = {v: i for i, v in enumerate(order)}
    edges = set()
    boundary = set()
    for v in order:
        full = p.neighbors(v)
        inside = [w for w in full if w in index]
        if len(inside) < len(full):
            boundary.add(index[v])
        for w in inside:
            a, b = index[v], index[w]
            edges.add((min(a, b), max(a, b)))
    g = Graph.from_edges(len(order), sorted(edges), name)
    return Patch(g, frozenset(boundary), tuple(order), EdgeRef.of(index[p.base[0]], index[p.base[1]]))


@dataclass(frozen=True)
class PatchCertificate:
    certified_edges: list[EdgeRef]
    flat_on_certified: bool
    nonflat: list[tuple[EdgeRef, object]]


def certified_edges(p: Patch, margin: int = PATCH_MARGIN) -> list[EdgeRef]:
    out = []
    for e in p.graph.edges():
        for x in (e.u, e.v):
            dist = p.graph.bfs(x)
            if all(v not in p.boundary for v in range(p.graph.n) if dist[v] <= margin):
                out.append(e)
                break
    return out


def certify_patch(p: Patch, margin: int = PATCH_MARGIN) -> PatchCertificate:
    edges = certified_edges(p, margin)
    if not edges:
        raise CatalogError(f"no certifiable edge: no vertex has an interior {margin}-ball in this patch")
    bad = []
    for e in edges:
        k = lly_curvature(p.graph, e).k_star
        if k != 0:
            bad.append((e, k))
    return PatchCertificate(edges, not bad, bad)


# ------------------------------------------------------- excluded configurations


def _two_c3_shared() -> Graph:
    # (4,4) edge 0-1 with common neighbours 2 and 3
    return _from_adj({0: [1, 2, 3, 4], 1: [2, 3, 5]}, "two_c3_shared")


def _c3_and_c4_shared() -> Graph:
    return _from_adj({0: [1, 2, 4], 1: [2, 3], 3: [4]}, "c3_and_c4_shared")


def _type_a_c5() -> Graph:
    # 5-cycle 0..4; 4-cycles 0-1-2-5 and 2-3-4-6 each cover two of its edges, 4-0-7-8 the last one
    return _from_adj({0: [1, 4, 5, 7], 1: [2], 2: [3, 5, 6], 3: [4], 4: [6, 8], 7: [8]}, "type_a_c5")


def _type_b_c5() -> Graph:
    # 5-cycle 0..4; 4-cycle 0-1-2-5 covers two edges, separate 4-cycles on the other three
    return _from_adj(
        {0: [1, 4, 5, 11], 1: [2], 2: [3, 5, 7], 3: [4, 6, 8], 4: [9, 10], 6: [7], 8: [9], 10: [11]},
        "type_b_c5",
    )


def _type5b_seed() -> Graph:
    # (3,4) edge x=0, y=1 with x1=2, x2=3, y1=4, y2=5, y3=6:
    # d(x1,y1)=1, d(x2,y2)=2, d(x2,y3)=3, d(x1,y3)=2, d(x1,y2)=3
    return _from_adj({0: [1, 2, 3], 1: [4, 5, 6], 2: [4, 8], 3: [7], 7: [5], 8: [6]}, "type5b_seed")


EXCLUDED: dict[str, Callable[[], Graph]] = {
    "type_a_c5": _type_a_c5,
    "type_b_c5": _type_b_c5,
    "two_c3_shared": _two_c3_shared,
    "c3_and_c4_shared": _c3_and_c4_shared,
    "type5b_seed": _type5b_seed,
}


def excluded_configuration(name: str) -> Graph:
    try:
        return EXCLUDED[name]()
    except KeyError:
        raise CatalogError(f"unknown configuration {name!r}; known: {', '.join(EXCLUDED)}") from None


def catalog_entries() -> list[str]:
    return list(NAMED) + [f"family:{f}" for f in FAMILIES]


def default_family_grid() -> list[FamilySpec]:
    """Family quotients exercised by the test grid."""
    grid = [FamilySpec("c4_chain", {"length": k}) for k in range(1, 9)]
    grid += [FamilySpec("c4c4_strip", {"length": m}) for m in range(6, 11)]
    for L in range(6, 9):
        for W in range(6, 9):
            grid.append(FamilySpec("lattice4", {"length": L, "width": W, "glue": "torus"}))
            grid.append(FamilySpec("lattice4", {"length": L, "width": W, "glue": "klein"}))
            grid.append(FamilySpec("lattice4", {"length": L, "width": W, "glue": "twist", "shift": 1}))
    for length in range(1, 5):
        for width in range(6, 11):
            if width % 2 == 0:
                grid.append(FamilySpec("c4_grid_band", {"length": length, "width": width, "glue": "cyclic"}))
            if (width + length) % 2:
                grid.append(FamilySpec("c4_grid_band", {"length": length, "width": width, "glue": "mobius"}))
    grid.append(FamilySpec("type_c"))
    return grid


__all__ = [
    "EXCLUDED",
    "FAMILIES",
    "NAMED",
    "CatalogError",
    "FamilySpec",
    "Patch",
    "PatchCertificate",
    "build_patch",
    "catalog_entries",
    "certify_patch",
    "excluded_configuration",
    "family",
    "named",
    "GraphError",
]
