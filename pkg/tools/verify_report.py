#!/usr/bin/env python3
"""Re-check a ricciflat JSON report using only the standard library.

For every edge block: the measures are rebuilt from the graph, the coupling's
marginals and cost are checked, the potential is checked to be 1-Lipschitz on
the union of supports, and its dual objective must equal the reported W. The
curvature k must equal k_alpha* / (1 - alpha*) with k_alpha* = 1 - W.

Usage: verify_report.py REPORT.json   (or '-' for stdin). Exit 0 when all checks pass.
"""

from __future__ import annotations

import json
import sys
from collections import deque
from fractions import Fraction


def q(value) -> Fraction:
    if isinstance(value, dict):
        value = value["exact"]
    return Fraction(value)


def distances(n: int, adj: list[list[int]], source: int) -> list[int | None]:
    dist: list[int | None] = [None] * n
    dist[source] = 0
    todo = deque([source])
    while todo:
        v = todo.popleft()
        for w in adj[v]:
            if dist[w] is None:
                dist[w] = dist[v] + 1
                todo.append(w)
    return dist


def lazy(adj: list[list[int]], x: int, alpha: Fraction) -> dict[int, Fraction]:
    out = {x: alpha} if alpha else {}
    share = (1 - alpha) / len(adj[x])
    if share:
        for w in adj[x]:
            out[w] = out.get(w, Fraction(0)) + share
    return out


def check_transport(n, adj, x, y, block, problems, where) -> Fraction:
    alpha = q(block["alpha"])
    mu_x, mu_y = lazy(adj, x, alpha), lazy(adj, y, alpha)
    if {v: q(m) for v, m in block["mu_x"]} != mu_x or {v: q(m) for v, m in block["mu_y"]} != mu_y:
        problems.append(f"{where}: reported measures differ from the lazy walk")
    rows: dict[int, Fraction] = {}
    cols: dict[int, Fraction] = {}
    cost = Fraction(0)
    dist_cache: dict[int, list] = {}

    def d(a: int, b: int) -> int:
        if a not in dist_cache:
            dist_cache[a] = distances(n, adj, a)
        value = dist_cache[a][b]
        if value is None:
            raise ValueError(f"{a} and {b} are disconnected")
        return value

    for a, b, m in block["coupling"]:
        m = q(m)
        if m < 0:
            problems.append(f"{where}: negative coupling entry at ({a}, {b})")
        rows[a] = rows.get(a, Fraction(0)) + m
        cols[b] = cols.get(b, Fraction(0)) + m
        cost += m * d(a, b)
    if {k: v for k, v in rows.items() if v} != mu_x:
        problems.append(f"{where}: coupling row sums differ from mu_x")
    if {k: v for k, v in cols.items() if v} != mu_y:
        problems.append(f"{where}: coupling column sums differ from mu_y")
    w = q(block["W"])
    if cost != w:
        problems.append(f"{where}: coupling cost {cost} != W {w}")
    f = {v: q(val) for v, val in block["potential"]}
    domain = sorted(set(mu_x) | set(mu_y))
    if any(v not in f for v in domain):
        problems.append(f"{where}: potential misses a support vertex")
        return w
    for a in domain:
        for b in domain:
            if f[a] - f[b] > d(a, b):
                problems.append(f"{where}: potential not 1-Lipschitz on ({a}, {b})")
    dual = sum(f[v] * m for v, m in mu_x.items()) - sum(f[v] * m for v, m in mu_y.items())
    if dual != w:
        problems.append(f"{where}: dual objective {dual} != W {w}")
    return w


def verify(doc: dict) -> list[str]:
    problems: list[str] = []
    n = doc["graph"]["n"]
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in doc["graph"]["edges"]:
        adj[u].append(v)
        adj[v].append(u)
    for block in doc.get("edges", []):
        x, y = block["edge"]
        where = f"edge ({x}, {y})"
        if y not in adj[x]:
            problems.append(f"{where}: not an edge of the graph")
            continue
        a_star = Fraction(1, max(len(adj[x]), len(adj[y])) + 1)
        if q(block["alpha_star"]) != a_star:
            problems.append(f"{where}: alpha* should be {a_star}")
        k_alpha = {q(a): q(v) for a, v in block["k_alpha"]}
        for t in block["transport"]:
            w = check_transport(n, adj, x, y, t, problems, where)
            alpha = q(t["alpha"])
            if k_alpha.get(alpha) != 1 - w:
                problems.append(f"{where}: k_alpha at {alpha} should be {1 - w}")
            if alpha == a_star and q(block["k"]) != (1 - w) / (1 - a_star):
                problems.append(f"{where}: k should be {(1 - w) / (1 - a_star)}")
    summary = doc.get("summary", {})
    if "flat" in summary and doc["command"] == "curvature":
        flat = all(q(b["k"]) == 0 for b in doc.get("edges", []))
        if summary["flat"] != flat:
            problems.append("summary.flat disagrees with the edge blocks")
    return problems


def main(argv: list[str]) -> int:
    if len(argv) != 2:
        print(__doc__.strip().splitlines()[-1], file=sys.stderr)
        return 2
    text = sys.stdin.read() if argv[1] == "-" else open(argv[1]).read()
    problems = verify(json.loads(text))
    for p in problems:
        print(p)
    if not problems:
        print("ok")
    return 1 if problems else 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
