"""Lazy random-walk measures, alpha-curvature, Lin-Lu-Yau curvature and idleness profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from ricciflat.graph import EdgeRef, Graph, GraphError, is_connected
from ricciflat.transport import Distribution, TransportResult, as_fraction, wasserstein


class CurvatureError(ValueError):
    pass


class IdlenessShapeError(AssertionError):
    """The computed idleness function contradicts its guaranteed piecewise-linear shape."""


def lazy_measure(g: Graph, x: int, alpha: Fraction | int | str) -> Distribution:
    a = as_fraction(alpha)
    if not 0 <= a <= 1:
        raise CurvatureError(f"idleness {a} outside [0, 1]")
    d = g.degree(x)
    if d == 0:
        raise CurvatureError(f"vertex {x} is isolated")
    masses: dict[int, Fraction] = {}
    if a:
        masses[x] = a
    share = (1 - a) / d
    if share:
        for w in g.neighbors(x):
            masses[w] = share
    return Distribution(masses)


def _check_edge(g: Graph, e: EdgeRef | tuple[int, int]) -> tuple[int, int]:
    x, y = e
    if not (0 <= x < g.n and 0 <= y < g.n) or not g.has_edge(x, y):
        raise GraphError(f"({x}, {y}) is not an edge")
    return x, y


def k_alpha_certified(g: Graph, e: EdgeRef | tuple[int, int], alpha) -> tuple[Fraction, TransportResult]:
    x, y = _check_edge(g, e)
    a = as_fraction(alpha)
    result = wasserstein(g, lazy_measure(g, x, a), lazy_measure(g, y, a))
    return 1 - result.value, result


def k_alpha(g: Graph, e: EdgeRef | tuple[int, int], alpha) -> Fraction:
    return k_alpha_certified(g, e, alpha)[0]


def critical_idleness(dx: int, dy: int) -> Fraction:
    return Fraction(1, max(dx, dy) + 1)


@dataclass(frozen=True)
class CurvatureReport:
    edge: EdgeRef
    k_star: Fraction
    alpha_star: Fraction
    k_alpha_at: dict[Fraction, Fraction]
    certificate: TransportResult
    extra_certificates: dict[Fraction, TransportResult] = field(default_factory=dict)

    @property
    def flat(self) -> bool:
        return self.k_star == 0


def lly_curvature(g: Graph, e: EdgeRef | tuple[int, int], alphas: Iterable = ()) -> CurvatureReport:
    """Lin-Lu-Yau curvature from the single idleness value 1/(max degree + 1).

    k_alpha is linear on [alpha*, 1] and vanishes at alpha = 1, so the limit of
    k_alpha / (1 - alpha) equals k_alpha* / (1 - alpha*).
    """
    x, y = _check_edge(g, e)
    a_star = critical_idleness(g.degree(x), g.degree(y))
    k_a, cert = k_alpha_certified(g, (x, y), a_star)
    values = {a_star: k_a}
    extra: dict[Fraction, TransportResult] = {}
    for a in alphas:
        a = as_fraction(a)
        if a not in values:
            values[a], extra[a] = k_alpha_certified(g, (x, y), a)
    return CurvatureReport(EdgeRef.of(x, y), k_a / (1 - a_star), a_star, values, cert, extra)


def closed_form_off_short_cycles(dx: int, dy: int) -> Fraction:
    """Curvature of an edge lying on no 3-, 4- or 5-cycle."""
    return Fraction(2, dx) + Fraction(2, dy) - 2


def upper_bound_off_c3c4(dx: int, dy: int) -> Fraction:
    """Upper bound on the curvature of an edge lying on no 3- or 4-cycle."""
    return Fraction(1, dx) + Fraction(2, dy) - 1


@dataclass(frozen=True)
class FlatnessResult:
    flat: bool
    witness: EdgeRef | None
    witness_k: Fraction | None
    reports: list[CurvatureReport]


def is_ricci_flat(g: Graph, full: bool = False) -> FlatnessResult:
    """Check k = 0 on every edge in lexicographic order.

    With full=False the scan stops at the first edge with nonzero curvature.
    """
    if not is_connected(g):
        raise CurvatureError("graph is not connected")
    if g.n < 2:
        raise CurvatureError("graph has no edges")
    reports: list[CurvatureReport] = []
    witness: EdgeRef | None = None
    witness_k: Fraction | None = None
    for e in g.edges():
        r = lly_curvature(g, e)
        reports.append(r)
        if r.k_star != 0 and witness is None:
            witness, witness_k = e, r.k_star
            if not full:
                break
    return FlatnessResult(witness is None, witness, witness_k, reports)


@dataclass(frozen=True)
class Segment:
    start: Fraction
    end: Fraction
    slope: Fraction


@dataclass(frozen=True)
class IdlenessProfile:
    edge: EdgeRef
    breakpoints: tuple[Fraction, ...]
    values: tuple[Fraction, ...]
    segments: tuple[Segment, ...]
    candidate_breaks: tuple[Fraction, ...]

    @property
    def pieces(self) -> int:
        return len(self.segments)

    def value_at(self, alpha: Fraction) -> Fraction:
        for s, v in zip(self.segments, self.values):
            if s.start <= alpha <= s.end:
                return v + s.slope * (alpha - s.start)
        raise ValueError(f"{alpha} outside [0, 1]")

    def k_from_final_slope(self) -> Fraction:
        # k_alpha / (1 - alpha) -> -slope as alpha -> 1 because k_1 = 0
        return -self.segments[-1].slope


def _supporting_slope(g: Graph, x: int, y: int, alpha: Fraction, result: TransportResult) -> Fraction:
    """Slope of a supporting line of alpha -> k_alpha at alpha, read off the optimal dual.

    W_alpha is a maximum over 1-Lipschitz f of a function linear in alpha, so the
    optimal f at alpha gives a line below W touching it there.
    """
    f = result.dual.values
    dx, dy = g.degree(x), g.degree(y)
    dw = f[x] - sum((f[w] for w in g.neighbors(x)), Fraction(0)) / dx
    dw -= f[y] - sum((f[w] for w in g.neighbors(y)), Fraction(0)) / dy
    return -dw


def idleness_profile(g: Graph, e: EdgeRef | tuple[int, int]) -> IdlenessProfile:
    """Piecewise-linear description of alpha -> k_alpha on [0, 1].

    k_alpha is linear on [0, 1/(lcm+1)] and on [1/(max+1), 1]; both are checked
    for collinearity at two interior rationals, and a failure raises
    IdlenessShapeError. Between the two, breakpoints need not sit at either
    candidate, so they are located exactly by intersecting supporting lines of
    the concave function (each from an optimal dual potential).
    """
    x, y = _check_edge(g, e)
    dx, dy = g.degree(x), g.degree(y)
    lcm_break = Fraction(1, math.lcm(dx, dy) + 1)
    max_break = Fraction(1, max(dx, dy) + 1)
    cache: dict[Fraction, tuple[Fraction, TransportResult]] = {}

    def k(a: Fraction) -> Fraction:
        if a not in cache:
            cache[a] = k_alpha_certified(g, (x, y), a)
        return cache[a][0]

    def linear_slope(a: Fraction, b: Fraction) -> Fraction:
        slope = (k(b) - k(a)) / (b - a)
        for t in (Fraction(1, 2), Fraction(1, 3)):
            m = a + (b - a) * t
            if k(m) != k(a) + slope * (m - a):
                raise IdlenessShapeError(
                    f"k_alpha not linear on [{a}, {b}] for edge ({x}, {y}): value at {m} is {k(m)}"
                )
        return slope

    if k(Fraction(1)) != 0:
        raise IdlenessShapeError(f"k_1 = {k(Fraction(1))} != 0 for edge ({x}, {y})")
    first = linear_slope(Fraction(0), lcm_break)
    last = linear_slope(max_break, Fraction(1))

    # (point, slope of the piece starting there)
    pieces: list[tuple[Fraction, Fraction]] = [(Fraction(0), first)]

    def refine(a: Fraction, sa: Fraction, b: Fraction, sb: Fraction) -> None:
        # lines through (a, k(a)) and (b, k(b)) with slopes sa >= sb bound k from above
        if sa == sb:
            return
        c = (k(b) - k(a) + sa * a - sb * b) / (sa - sb)
        if k(c) == k(a) + sa * (c - a):
            pieces.append((c, sb))
            return
        sc = _supporting_slope(g, x, y, c, cache[c][1])
        refine(a, sa, c, sc)
        refine(c, sc, b, sb)

    if lcm_break < max_break:
        refine(lcm_break, first, max_break, last)
    elif first != last:
        pieces.append((max_break, last))

    # right slope at each start; a repeated start is a kink, whose right slope is the smaller
    right: dict[Fraction, Fraction] = {}
    for start, slope in pieces:
        right[start] = min(slope, right.get(start, slope))
    keep: list[tuple[Fraction, Fraction]] = []
    for start in sorted(right):
        if keep and keep[-1][1] == right[start]:
            continue
        keep.append((start, right[start]))
    bounds = [s for s, _ in keep] + [Fraction(1)]
    segments = tuple(Segment(bounds[i], bounds[i + 1], keep[i][1]) for i in range(len(keep)))
    return IdlenessProfile(
        EdgeRef.of(x, y),
        tuple(bounds),
        tuple(k(a) for a in bounds),
        segments,
        (lcm_break, max_break),
    )
