"""Local structure of curvature-zero edges and whole-graph exclusion checks.

An edge (x, y) is described by the distances d(x_i, y_j) between the other
neighbours x_i of x and y_j of y (distance 0 means a common neighbour, 1 a
4-cycle through the edge, 2 a 5-cycle). Each tag below is a pattern on that
distance table for one endpoint-degree pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Callable, Iterable, Sequence

from ricciflat.curvature import lly_curvature
from ricciflat.graph import EdgeRef, Graph, GraphError, count_cycles_through, cycle_membership, cycle_paths

TAGS = (
    "Type1",
    "Type2",
    "Type3",
    "Type4Case1",
    "Type4Case2",
    "Type5Case1",
    "Type5Case2",
    "Type5a",
    "Type5b",
    "Type6a",
    "Type6b",
    "Type6c",
)

DEGREE_SIGNATURE = {
    "Type1": (2, 2),
    "Type2": (3, 2),
    "Type3": (4, 2),
    "Type4Case1": (3, 3),
    "Type4Case2": (3, 3),
    "Type5Case1": (3, 4),
    "Type5Case2": (3, 4),
    "Type5a": (3, 4),
    "Type5b": (3, 4),
    "Type6a": (4, 4),
    "Type6b": (4, 4),
    "Type6c": (4, 4),
}


class ClassificationError(ValueError):
    """No local type matches a supposedly flat edge."""


@dataclass(frozen=True)
class DistanceFact:
    pair: tuple[str, str]
    required: frozenset[int]
    observed: int

    def holds(self) -> bool:
        return self.observed in self.required


@dataclass(frozen=True)
class EdgeLocalType:
    tag: str
    edge: EdgeRef
    bindings: dict[str, int]
    distance_facts: tuple[DistanceFact, ...]

    def verify(self, g: Graph) -> bool:
        """Re-check every recorded fact against fresh BFS distances and the degree signature."""
        x, y = self.bindings["x"], self.bindings["y"]
        if (g.degree(x), g.degree(y)) != DEGREE_SIGNATURE[self.tag]:
            return False
        for fact in self.distance_facts:
            a, b = (self.bindings[r] for r in fact.pair)
            if g.bfs(a)[b] != fact.observed or not fact.holds():
                return False
        return True


class _Table:
    """Distances between the other neighbours of x and of y."""

    def __init__(self, g: Graph, x: int, y: int):
        self.x, self.y = x, y
        self.xs = [w for w in g.neighbors(x) if w != y]
        self.ys = [w for w in g.neighbors(y) if w != x]
        self.d = {(a, b): int(g.bfs(a)[b]) for a in self.xs for b in self.ys}

    def values(self) -> list[int]:
        return list(self.d.values())

    def count(self, value: int) -> int:
        return sum(1 for v in self.d.values() if v == value)


Rule = Callable[[Callable[[int, int], int]], "list[tuple[tuple[int, int], Iterable[int]]] | None"]


def _search(t: _Table, rule: Rule) -> tuple[dict[str, int], list[DistanceFact]] | None:
    """Try neighbour orderings lexicographically; return the first binding the rule accepts.

    A rule receives dist(i, j) = d(x_i, y_j) (1-based role indices) and returns the
    list of ((i, j), allowed values) facts it relied on, or None.
    """
    for xp in permutations(t.xs):
        for yp in permutations(t.ys):

            def dist(i: int, j: int, xp=xp, yp=yp) -> int:
                return t.d[(xp[i - 1], yp[j - 1])]

            facts = rule(dist)
            if facts is None:
                continue
            bindings = {"x": t.x, "y": t.y}
            bindings.update({f"x{i + 1}": v for i, v in enumerate(xp)})
            bindings.update({f"y{j + 1}": v for j, v in enumerate(yp)})
            recorded = [
                DistanceFact((f"x{i}", f"y{j}"), frozenset(allowed), dist(i, j)) for (i, j), allowed in facts
            ]
            return bindings, recorded
    return None


def _type1(dist):
    return [((1, 1), {3})] if dist(1, 1) == 3 else None


def _type2(dist):
    return [((1, 1), {2}), ((2, 1), {3})] if (dist(1, 1), dist(2, 1)) == (2, 3) else None


def _type3(dist):
    if dist(1, 1) == 1 and dist(2, 1) == 3 and dist(3, 1) == 3:
        return [((1, 1), {1}), ((2, 1), {3}), ((3, 1), {3})]
    if dist(1, 1) == 2 and dist(2, 1) == 2 and dist(3, 1) >= 1:
        return [((1, 1), {2}), ((2, 1), {2})]
    return None


def _type4_case1(dist):
    if dist(1, 1) != 1 or dist(2, 2) != 3:
        return None
    facts = [((1, 1), {1}), ((2, 2), {3})]
    if dist(1, 2) in (1, 2):
        if dist(2, 1) != 3:
            return None
        facts.append(((2, 1), {3}))
    if dist(2, 1) in (1, 2):
        if dist(1, 2) != 3:
            return None
        facts.append(((1, 2), {3}))
    return facts


def _type4_case2(dist):
    return [((1, 1), {2}), ((2, 2), {2})] if dist(1, 1) == 2 and dist(2, 2) == 2 else None


def _type5_case1(dist):
    if dist(1, 1) == 0 and dist(2, 2) == 3 and dist(2, 3) == 3:
        return [((1, 1), {0}), ((2, 2), {3}), ((2, 3), {3})]
    return None


def _type5_case2(dist):
    if dist(1, 1) == 1 and dist(1, 2) == 1:
        # x1 sees y1 and y2: x2 must be far from y3 and within 2 of y1 or y2
        if dist(2, 3) == 3 and 2 in (dist(2, 1), dist(2, 2)):
            which = (2, 1) if dist(2, 1) == 2 else (2, 2)
            return [((1, 1), {1}), ((1, 2), {1}), ((2, 3), {3}), (which, {2})]
        return None
    if dist(1, 1) == 1 and dist(2, 1) == 1:
        if (dist(1, 2), dist(1, 3), dist(2, 2), dist(2, 3)) in ((2, 2, 3, 3), (3, 3, 2, 2)):
            tup = (dist(1, 2), dist(1, 3), dist(2, 2), dist(2, 3))
            return [((1, 1), {1}), ((2, 1), {1})] + [
                (pair, {v}) for pair, v in zip(((1, 2), (1, 3), (2, 2), (2, 3)), tup)
            ]
    return None


def _type5a(dist):
    if dist(1, 1) == 1 and dist(2, 2) == 2 and dist(2, 3) == 2 and dist(1, 2) == 3 and dist(1, 3) == 3:
        return [((1, 1), {1}), ((2, 2), {2}), ((2, 3), {2}), ((1, 2), {3}), ((1, 3), {3})]
    return None


def _type5b(dist):
    if dist(1, 1) == 1 and dist(2, 2) == 2 and dist(2, 3) == 3 and dist(1, 3) == 2 and dist(1, 2) in (2, 3):
        return [((1, 1), {1}), ((2, 2), {2}), ((2, 3), {3}), ((1, 3), {2}), ((1, 2), {2, 3})]
    return None


def _type6a(dist):
    if dist(1, 1) == 0 and dist(2, 2) == 2 and dist(3, 3) == 3:
        return [((1, 1), {0}), ((2, 2), {2}), ((3, 3), {3})]
    return None


def _type6b(dist):
    if dist(1, 1) == 1 and dist(2, 2) == 1 and dist(3, 3) == 3:
        return [((1, 1), {1}), ((2, 2), {1}), ((3, 3), {3})]
    return None


def _type6c(dist):
    if dist(1, 1) == 1 and dist(2, 2) == 2 and dist(3, 3) == 2:
        return [((1, 1), {1}), ((2, 2), {2}), ((3, 3), {2})]
    return None


# (tag, rule, guard on the distance table) in trial order per degree pair
_RULES: dict[tuple[int, int], list[tuple[str, Rule, Callable[[_Table], bool]]]] = {
    (2, 2): [("Type1", _type1, lambda t: True)],
    (3, 2): [("Type2", _type2, lambda t: t.count(0) == 0)],
    (4, 2): [("Type3", _type3, lambda t: t.count(0) == 0)],
    (3, 3): [
        ("Type4Case1", _type4_case1, lambda t: t.count(0) == 0),
        ("Type4Case2", _type4_case2, lambda t: t.count(0) == 0 and t.count(1) == 0),
    ],
    (3, 4): [
        ("Type5Case1", _type5_case1, lambda t: True),
        ("Type5Case2", _type5_case2, lambda t: t.count(0) == 0),
        ("Type5a", _type5a, lambda t: t.count(0) == 0 and t.count(1) == 1),
        ("Type5b", _type5b, lambda t: t.count(0) == 0 and t.count(1) == 1),
    ],
    (4, 4): [
        ("Type6a", _type6a, lambda t: True),
        ("Type6b", _type6b, lambda t: t.count(0) == 0),
        ("Type6c", _type6c, lambda t: t.count(0) == 0),
    ],
}


def _orientations(g: Graph, e: EdgeRef) -> list[tuple[int, int]]:
    u, v = e.u, e.v
    du, dv = g.degree(u), g.degree(v)
    if du == dv:
        return [(u, v), (v, u)]
    # x is the higher-degree end, except for the (3, 4) pair where x has degree 3
    if {du, dv} == {3, 4}:
        return [(u, v)] if du == 3 else [(v, u)]
    return [(u, v)] if du > dv else [(v, u)]


def match_tags(g: Graph, e: EdgeRef, tags: Sequence[str] | None = None) -> list[EdgeLocalType]:
    """Every tag whose pattern some binding satisfies (one binding per tag)."""
    out = []
    for x, y in _orientations(g, e):
        key = (g.degree(x), g.degree(y))
        t = _Table(g, x, y)
        for tag, rule, guard in _RULES.get(key, []):
            if tags is not None and tag not in tags:
                continue
            if any(m.tag == tag for m in out) or not guard(t):
                continue
            hit = _search(t, rule)
            if hit is not None:
                out.append(EdgeLocalType(tag, e, hit[0], tuple(hit[1])))
    return out


def classify_flat_edge(g: Graph, e: EdgeRef | tuple[int, int], check_flat: bool = True) -> EdgeLocalType:
    edge = g.edge(*e)
    if check_flat:
        k = lly_curvature(g, edge).k_star
        if k != 0:
            raise ClassificationError(f"edge ({edge.u}, {edge.v}) has curvature {k}, not 0")
    for x, y in _orientations(g, edge):
        if max(g.degree(x), g.degree(y)) > 4:
            raise ClassificationError(f"edge ({edge.u}, {edge.v}) has an endpoint of degree above 4")
        t = _Table(g, x, y)
        for tag, rule, guard in _RULES.get((g.degree(x), g.degree(y)), []):
            if not guard(t):
                continue
            hit = _search(t, rule)
            if hit is not None:
                return EdgeLocalType(tag, edge, hit[0], tuple(hit[1]))
    raise ClassificationError(
        f"no local type matches edge ({edge.u}, {edge.v}) with degrees "
        f"({g.degree(edge.u)}, {g.degree(edge.v)})"
    )


@dataclass(frozen=True)
class Violation:
    rule: str
    edge: EdgeRef
    detail: str
    cycles: tuple[tuple[int, ...], ...] = field(default=())


def check_exclusion_lemmas(g: Graph) -> list[Violation]:
    """Necessary conditions every flat graph of maximum degree at most 4 satisfies."""
    out: list[Violation] = []
    for e in g.edges():
        du, dv = g.degree(e.u), g.degree(e.v)
        flags = cycle_membership(g, e)
        pair = tuple(sorted((du, dv)))
        wit = tuple(flags.witnesses.values())
        if pair != (2, 2) and not flags.any_short():
            out.append(Violation("short-cycle-required", e, "edge lies on no 3-, 4- or 5-cycle"))
        if flags.in_c3 and flags.in_c4:
            out.append(Violation("no-c3-with-c4", e, "edge lies on both a 3-cycle and a 4-cycle", wit))
        if pair == (3, 4):
            if flags.in_c3:
                out.append(Violation("no-c3-on-34", e, "(3,4) edge lies on a 3-cycle", (flags.witnesses[3],)))
            c4s = cycle_paths(g, e, 4)
            if len(c4s) != 1:
                out.append(Violation("one-c4-on-34", e, f"(3,4) edge lies on {len(c4s)} 4-cycles", tuple(c4s)))
            else:
                x = e.u if du == 3 else e.v
                y = e.v if x == e.u else e.u
                cyc = c4s[0]
                on = cyc[1] if cyc[0] == x else cyc[-2]
                off = [w for w in g.neighbors(x) if w not in (y, on)][0]
                if g.degree(off) != 3 or g.degree(on) != 4:
                    out.append(
                        Violation(
                            "one-c4-degrees-34",
                            e,
                            f"x-neighbour on the 4-cycle has degree {g.degree(on)}, off it {g.degree(off)}",
                            (cyc,),
                        )
                    )
        if pair == (3, 3):
            if flags.in_c4:
                out.append(Violation("no-c4-on-33", e, "(3,3) edge lies on a 4-cycle", (flags.witnesses[4],)))
            c5s = cycle_paths(g, e, 5)
            if len(c5s) >= 2:
                for end, other in ((e.u, e.v), (e.v, e.u)):
                    side = [w for w in g.neighbors(end) if w != other]
                    degs = {g.degree(w) for w in side}
                    if len(degs) > 1:
                        out.append(
                            Violation(
                                "two-c5-degrees-33",
                                e,
                                f"neighbours {side} of {end} have unequal degrees",
                                tuple(c5s[:2]),
                            )
                        )
    return out


def type5b_excluded(g: Graph) -> bool:
    """True when no curvature-zero (3,4) edge of g admits a Type5b binding."""
    for e in g.edges():
        if {g.degree(e.u), g.degree(e.v)} != {3, 4}:
            continue
        if lly_curvature(g, e).k_star != 0:
            continue
        if match_tags(g, e, ["Type5b"]):
            return False
    return True


def classify_graph(g: Graph) -> tuple[list[EdgeLocalType], list[tuple[EdgeRef, str]]]:
    """Classify every flat edge; returns (types, failures)."""
    types, failures = [], []
    for e in g.edges():
        if lly_curvature(g, e).k_star != 0:
            continue
        try:
            types.append(classify_flat_edge(g, e, check_flat=False))
        except (ClassificationError, GraphError) as exc:
            failures.append((e, str(exc)))
    return types, failures


__all__ = [
    "TAGS",
    "ClassificationError",
    "DistanceFact",
    "EdgeLocalType",
    "Violation",
    "check_exclusion_lemmas",
    "classify_flat_edge",
    "classify_graph",
    "count_cycles_through",
    "match_tags",
    "type5b_excluded",
]
