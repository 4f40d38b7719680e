from __future__ import annotations

import os
import random
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ricciflat.graph import Graph

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def random_connected_graph(rng: random.Random, n: int, max_degree: int = 4, extra: float = 0.5) -> Graph:
    """Random spanning tree plus extra edges, all degrees capped."""
    order = list(range(n))
    rng.shuffle(order)
    edges: set[tuple[int, int]] = set()
    deg = [0] * n
    for i in range(1, n):
        v = order[i]
        choices = [u for u in order[:i] if deg[u] < max_degree]
        u = rng.choice(choices) if choices else order[i - 1]
        edges.add((min(u, v), max(u, v)))
        deg[u] += 1
        deg[v] += 1
    for _ in range(int(extra * n)):
        a, b = rng.sample(range(n), 2)
        key = (min(a, b), max(a, b))
        if key not in edges and deg[a] < max_degree and deg[b] < max_degree:
            edges.add(key)
            deg[a] += 1
            deg[b] += 1
    return Graph.from_edges(n, sorted(edges))


def random_distribution(rng: random.Random, vertices: list[int], size: int, denom: int = 12) -> dict[int, Fraction]:
    support = rng.sample(vertices, min(size, len(vertices)))
    weights = [rng.randint(1, denom) for _ in support]
    total = sum(weights)
    return {v: Fraction(w, total) for v, w in zip(support, weights)}


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 10, max_degree: int = 4):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    extra = draw(st.sampled_from([0.0, 0.3, 0.6, 1.0]))
    return random_connected_graph(random.Random(seed), n, max_degree, extra)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
