"""Exact canonical labeling by partition refinement and individualization.

The search tree is the usual one: refine an ordered partition to an equitable
one, individualize each vertex of the first smallest non-singleton cell, recurse.
Every leaf is a discrete partition, i.e. a relabeling; the canonical form is the
lexicographically largest relabeled adjacency among all leaves. Subtrees that
are images of explored ones under a known automorphism are skipped.
"""

from __future__ import annotations

from dataclasses import dataclass

from ricciflat.graph import Graph, GraphError

DEFAULT_BOUND = 64


@dataclass(frozen=True)
class CanonicalForm:
    order: tuple[int, ...]  # order[i] is the original vertex placed at position i
    rows: tuple[int, ...]  # adjacency bitmasks in canonical labels

    @property
    def n(self) -> int:
        return len(self.order)

    def certificate(self) -> str:
        n = self.n
        bits = 0
        count = 0
        for i in range(n):
            row = self.rows[i]
            for j in range(i + 1, n):
                bits = (bits << 1) | ((row >> j) & 1)
                count += 1
        pad = (-count) % 8
        payload = (bits << pad).to_bytes((count + pad) // 8, "big") if count else b""
        return (n.to_bytes(2, "big") + payload).hex()

    def graph(self, name: str | None = None) -> Graph:
        n = self.n
        adjacency = tuple(tuple(j for j in range(n) if (self.rows[i] >> j) & 1) for i in range(n))
        return Graph(n, adjacency, name)


def _masks(g: Graph) -> list[int]:
    out = []
    for row in g.adjacency:
        m = 0
        for w in row:
            m |= 1 << w
        out.append(m)
    return out


def _cell_mask(cell: list[int]) -> int:
    m = 0
    for v in cell:
        m |= 1 << v
    return m


def _refine(masks: list[int], cells: list[list[int]], splitters: list[int]) -> list[list[int]]:
    queue = list(splitters)
    head = 0
    while head < len(queue):
        s = queue[head]
        head += 1
        i = 0
        while i < len(cells):
            cell = cells[i]
            if len(cell) == 1:
                i += 1
                continue
            buckets: dict[int, list[int]] = {}
            for v in cell:
                buckets.setdefault((masks[v] & s).bit_count(), []).append(v)
            if len(buckets) == 1:
                i += 1
                continue
            parts = [buckets[c] for c in sorted(buckets)]
            cells[i : i + 1] = parts
            for p in parts:
                queue.append(_cell_mask(p))
            i += len(parts)
    return cells


def canonical_form(g: Graph, bound: int = DEFAULT_BOUND) -> CanonicalForm:
    n = g.n
    if n > bound:
        raise GraphError(f"canonical labeling bound exceeded: n = {n} > {bound}")
    if n == 0:
        return CanonicalForm((), ())
    masks = _masks(g)
    by_degree: dict[int, list[int]] = {}
    for v in range(n):
        by_degree.setdefault(masks[v].bit_count(), []).append(v)
    cells = [by_degree[d] for d in sorted(by_degree)]
    cells = _refine(masks, cells, [_cell_mask(c) for c in cells])

    best_rows: tuple[int, ...] | None = None
    best_order: tuple[int, ...] = ()
    leaves: dict[tuple[int, ...], tuple[int, ...]] = {}
    generators: list[list[int]] = []

    def leaf(order: tuple[int, ...]) -> None:
        nonlocal best_rows, best_order
        pos = [0] * n
        for i, v in enumerate(order):
            pos[v] = i
        rows = []
        for v in order:
            m = masks[v]
            r = 0
            while m:
                low = m & -m
                r |= 1 << pos[low.bit_length() - 1]
                m ^= low
            rows.append(r)
        key = tuple(rows)
        other = leaves.get(key)
        if other is not None:
            gamma = [0] * n
            for a, b in zip(other, order):
                gamma[a] = b
            generators.append(gamma)
        else:
            leaves[key] = order
        if best_rows is None or key > best_rows:
            best_rows, best_order = key, order

    def orbit_root(parent: list[int], v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    def search(cells: list[list[int]], fixed: tuple[int, ...]) -> None:
        target = -1
        size = n + 1
        for i, c in enumerate(cells):
            if 1 < len(c) < size:
                target, size = i, len(c)
        if target < 0:
            leaf(tuple(c[0] for c in cells))
            return
        explored: list[int] = []
        for v in sorted(cells[target]):
            if explored:
                parent = list(range(n))
                for gamma in generators:
                    if all(gamma[w] == w for w in fixed):
                        for a in range(n):
                            ra, rb = orbit_root(parent, a), orbit_root(parent, gamma[a])
                            if ra != rb:
                                parent[max(ra, rb)] = min(ra, rb)
                root = orbit_root(parent, v)
                if any(orbit_root(parent, w) == root for w in explored):
                    continue
            rest = [w for w in cells[target] if w != v]
            child = [list(c) for c in cells[:target]] + [[v], rest] + [list(c) for c in cells[target + 1 :]]
            child = _refine(masks, child, [1 << v])
            search(child, fixed + (v,))
            explored.append(v)

    search(cells, ())
    assert best_rows is not None
    return CanonicalForm(best_order, best_rows)


def canonical_certificate(g: Graph, bound: int = DEFAULT_BOUND) -> str:
    """Lowercase hex string equal for two graphs exactly when they are isomorphic."""
    return canonical_form(g, bound).certificate()


def canonical_graph(g: Graph, bound: int = DEFAULT_BOUND) -> Graph:
    return canonical_form(g, bound).graph(g.name)


def are_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges != h.num_edges:
        return False
    return canonical_certificate(g, max(g.n, DEFAULT_BOUND)) == canonical_certificate(h, max(h.n, DEFAULT_BOUND))
