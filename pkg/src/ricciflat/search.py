"""Exhaustive enumeration of small connected graphs and the Ricci-flat filter over them.

Graphs are grown one vertex at a time: every connected graph has a vertex whose
removal leaves it connected, so attaching a new vertex to every admissible
subset of an already-enumerated graph reaches every isomorphism class. Children
are deduplicated per order through their canonical certificates.

Intermediate graphs that cannot reach the minimum degree within the remaining
vertex budget are dropped: each later vertex supplies at most max_degree new
incident edges to the existing vertices.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

from ricciflat.canon import canonical_form
from ricciflat.curvature import CurvatureReport, is_ricci_flat
from ricciflat.formats import emit_graph6, parse_graph6
from ricciflat.graph import Graph, cycle_membership, cycle_paths, girth
from ricciflat.structure import EdgeLocalType, Violation, check_exclusion_lemmas, classify_graph

HARD_CAP = 11
PRUNE_RULES = ("leaf", "c3-and-c4", "c4-on-33", "c3-on-34", "two-c4-on-34")
# smallest known flat graph with a (3,4) edge on two 4-cycles; nothing smaller exists
TWO_C4_ON_34_WITNESS = "K?AA@b@BfOZ?"
TWO_C4_ON_34_FAILS_AT = 12


class SearchError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    max_n: int
    min_degree: int = 2
    max_degree: int = 4
    require_short_cycle: bool = False
    prune_rules: frozenset[str] = frozenset(PRUNE_RULES)
    allow_over_cap: bool = False
    workers: int = 1
    audit_sample: int = 0
    audit_seed: int = 0

    def __post_init__(self) -> None:
        if self.max_n < 1:
            raise SearchError("max_n must be at least 1")
        if self.max_n > HARD_CAP and not self.allow_over_cap:
            raise SearchError(f"max_n = {self.max_n} exceeds the hard cap {HARD_CAP}; pass allow_over_cap to override")
        if self.min_degree < 0 or self.max_degree < 1 or self.min_degree > self.max_degree:
            raise SearchError("degree bounds must satisfy 0 <= min_degree <= max_degree, max_degree >= 1")
        unknown = set(self.prune_rules) - set(PRUNE_RULES)
        if unknown:
            raise SearchError(f"unknown prune rules: {sorted(unknown)}")
        if self.max_n >= TWO_C4_ON_34_FAILS_AT and "two-c4-on-34" in self.prune_rules:
            raise SearchError(
                f"prune rule two-c4-on-34 drops the flat graph {TWO_C4_ON_34_WITNESS} on "
                f"{TWO_C4_ON_34_FAILS_AT} vertices; leave it out for max_n >= {TWO_C4_ON_34_FAILS_AT}"
            )
        if self.workers < 1:
            raise SearchError("workers must be positive")


def _deficit(degrees: list[int], min_degree: int) -> int:
    return sum(min_degree - d for d in degrees if d < min_degree)


def _children(parent: Graph, cfg: SearchConfig, final: bool) -> Iterator[Graph]:
    n = parent.n
    degrees = [parent.degree(v) for v in range(n)]
    open_vertices = [v for v in range(n) if degrees[v] < cfg.max_degree]
    needy = {v for v in range(n) if degrees[v] < cfg.min_degree}
    if final:
        # the new vertex is the last one: it must lift every deficient vertex
        if any(degrees[v] + 1 < cfg.min_degree for v in needy) or len(needy) > cfg.max_degree:
            return
        low = max(1, cfg.min_degree, len(needy))
    else:
        low = 1
    edges = [(e.u, e.v) for e in parent.edges()]
    for r in range(low, min(cfg.max_degree, len(open_vertices)) + 1):
        for subset in combinations(open_vertices, r):
            if final and not needy.issubset(subset):
                continue
            yield Graph.from_edges(n + 1, edges + [(v, n) for v in subset])


def enumerate_levels(cfg: SearchConfig) -> Iterator[list[tuple[str, Graph]]]:
    """Yield, for n = 1..max_n, the sorted (certificate, canonical graph) pairs of order n.

    Only graphs satisfying the degree bounds are yielded; intermediate levels may
    hold more graphs internally.
    """
    level: list[tuple[str, Graph]] = []
    single = Graph(1, ((),))
    form = canonical_form(single)
    level = [(form.certificate(), form.graph())]
    for n in range(1, cfg.max_n + 1):
        if n > 1:
            final = n == cfg.max_n
            seen: dict[str, Graph] = {}
            budget = cfg.max_degree * (cfg.max_n - n)
            for _, parent in level:
                for child in _children(parent, cfg, final):
                    form = canonical_form(child)
                    cert = form.certificate()
                    if cert in seen:
                        continue
                    degs = [child.degree(v) for v in range(n)]
                    if not final and _deficit(degs, cfg.min_degree) > budget:
                        # still record it so the same class is not re-canonicalized
                        seen[cert] = None  # type: ignore[assignment]
                        continue
                    seen[cert] = form.graph()
            level = sorted((c, g) for c, g in seen.items() if g is not None)
        yield [(c, g) for c, g in level if all(cfg.min_degree <= g.degree(v) for v in range(g.n))]


def enumerate_graphs(cfg: SearchConfig) -> Iterator[Graph]:
    """One canonical representative per isomorphism class, ordered by (n, certificate)."""
    for batch in enumerate_levels(cfg):
        for _, g in batch:
            if cfg.require_short_cycle and girth(g) > 4:
                continue
            yield g


def lemma_prune(g: Graph, rules: frozenset[str] | set[str] = frozenset(PRUNE_RULES)) -> tuple[bool, str | None]:
    """Return (keep, reason). A cut graph violates a necessary condition for flatness.

    Rules other than "leaf" rely on the maximum degree being at most 4.
    """
    degrees = [g.degree(v) for v in range(g.n)]
    if "leaf" in rules and any(d == 1 for d in degrees):
        return False, "leaf"
    if max(degrees, default=0) > 4:
        return True, None
    for e in g.edges():
        pair = tuple(sorted((degrees[e.u], degrees[e.v])))
        flags = None
        if "c3-and-c4" in rules:
            flags = cycle_membership(g, e)
            if flags.in_c3 and flags.in_c4:
                return False, "c3-and-c4"
        if pair == (3, 3) and "c4-on-33" in rules:
            if cycle_paths(g, e, 4, limit=1):
                return False, "c4-on-33"
        if pair == (3, 4):
            if "c3-on-34" in rules and cycle_paths(g, e, 3, limit=1):
                return False, "c3-on-34"
            if "two-c4-on-34" in rules and len(cycle_paths(g, e, 4, limit=2)) >= 2:
                return False, "two-c4-on-34"
    return True, None


@dataclass(frozen=True)
class FlatHit:
    graph: Graph
    certificate: str
    reports: list[CurvatureReport]
    types: list[EdgeLocalType]
    type_failures: list
    violations: list[Violation]


@dataclass
class SearchStats:
    enumerated: int = 0
    pruned: dict[str, int] = field(default_factory=dict)
    solved: int = 0
    audited: int = 0
    audit_failures: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class SearchResult:
    hits: list[FlatHit]
    stats: SearchStats


def _flat_check(item: tuple[str, str]) -> tuple[str, str, bool]:
    cert, g6 = item
    return cert, g6, is_ricci_flat(parse_graph6(g6)).flat


def find_ricci_flat(cfg: SearchConfig) -> SearchResult:
    stats = SearchStats()
    pending: list[tuple[str, str]] = []
    pruned_pool: list[tuple[str, str]] = []
    for batch in enumerate_levels(cfg):
        for cert, g in batch:
            if cfg.require_short_cycle and girth(g) > 4:
                continue
            stats.enumerated += 1
            if g.n < 2:
                continue
            keep, reason = lemma_prune(g, cfg.prune_rules) if cfg.prune_rules else (True, None)
            if not keep:
                stats.pruned[reason] = stats.pruned.get(reason, 0) + 1
                pruned_pool.append((cert, emit_graph6(g)))
                continue
            pending.append((cert, emit_graph6(g)))
    stats.solved = len(pending)
    if cfg.workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            checked = list(pool.map(_flat_check, pending, chunksize=256))
    else:
        checked = [_flat_check(item) for item in pending]
    if cfg.audit_sample and pruned_pool:
        rng = random.Random(cfg.audit_seed)
        sample = pruned_pool if len(pruned_pool) <= cfg.audit_sample else rng.sample(pruned_pool, cfg.audit_sample)
        for cert, g6, flat in map(_flat_check, sample):
            stats.audited += 1
            if flat:
                stats.audit_failures.append(g6)
    hits = []
    for cert, g6, flat in sorted(checked, key=lambda t: (len(t[0]), t[0])):
        if not flat:
            continue
        g = parse_graph6(g6)
        full = is_ricci_flat(g, full=True)
        types, failures = classify_graph(g)
        hits.append(FlatHit(g, cert, full.reports, types, failures, check_exclusion_lemmas(g)))
    hits.sort(key=lambda h: (h.graph.n, h.certificate))
    return SearchResult(hits, stats)
