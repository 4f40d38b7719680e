"""Edge-list and graph6 text formats."""

from __future__ import annotations

from ricciflat.graph import Graph, GraphError


class FormatError(GraphError):
    """Raised when text cannot be parsed into a simple graph."""


def parse_edge_list(text: str, name: str | None = None) -> Graph:
    """Parse "u v" lines with optional "n <count>" header and '#' comments."""
    declared_n: int | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n":
            if len(parts) != 2 or not parts[1].isdigit() or declared_n is not None or edges:
                raise FormatError(f"line {lineno}: malformed header {raw!r}")
            declared_n = int(parts[1])
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise FormatError(f"line {lineno}: expected two nonnegative integers, got {raw!r}")
        a, b = int(parts[0]), int(parts[1])
        if a == b:
            raise FormatError(f"line {lineno}: self-loop at vertex {a}")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise FormatError(f"line {lineno}: duplicate edge {key}")
        seen.add(key)
        edges.append(key)
    top = max((max(e) for e in edges), default=-1) + 1
    if declared_n is None:
        n = top
    else:
        if top > declared_n:
            raise FormatError(f"vertex id {top - 1} is not below declared n = {declared_n}")
        n = declared_n
    return Graph.from_edges(n, edges, name)


def emit_edge_list(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{e.u} {e.v}" for e in g.edges())
    return "\n".join(lines) + "\n"


_HEADER = ">>graph6<<"


def _encode_n(n: int) -> list[int]:
    if n < 63:
        return [n]
    if n < 258048:
        return [63, (n >> 12) & 63, (n >> 6) & 63, n & 63]
    return [63, 63] + [(n >> s) & 63 for s in (30, 24, 18, 12, 6, 0)]


def emit_graph6(g: Graph) -> str:
    bits: list[int] = []
    for j in range(1, g.n):
        row = g.adjacency[j]
        for i in range(j):
            bits.append(1 if i in row else 0)
    while len(bits) % 6:
        bits.append(0)
    chunks = _encode_n(g.n)
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k : k + 6]:
            value = (value << 1) | b
        chunks.append(value)
    return "".join(chr(c + 63) for c in chunks)


def parse_graph6(text: str, name: str | None = None) -> Graph:
    s = text.strip()
    if s.startswith(_HEADER):
        s = s[len(_HEADER) :]
    if not s:
        raise FormatError("empty graph6 string")
    data = []
    for pos, ch in enumerate(s):
        c = ord(ch) - 63
        if not 0 <= c <= 63:
            raise FormatError(f"invalid graph6 character {ch!r} at position {pos}")
        data.append(c)
    if data[0] < 63:
        n, body = data[0], data[1:]
    elif len(data) >= 2 and data[1] < 63:
        if len(data) < 4:
            raise FormatError("truncated graph6 size field")
        n = (data[1] << 12) | (data[2] << 6) | data[3]
        body = data[4:]
    else:
        if len(data) < 8:
            raise FormatError("truncated graph6 size field")
        n = 0
        for c in data[2:8]:
            n = (n << 6) | c
        body = data[8:]
    need = n * (n - 1) // 2
    chunks = (need + 5) // 6
    if len(body) < chunks:
        raise FormatError(f"truncated graph6 payload: expected {chunks} bytes, got {len(body)}")
    if len(body) > chunks:
        raise FormatError("trailing data after graph6 payload")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if (body[k // 6] >> (5 - k % 6)) & 1:
                edges.append((i, j))
            k += 1
    return Graph.from_edges(n, edges, name)
