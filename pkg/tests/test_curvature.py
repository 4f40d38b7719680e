from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import connected_graphs, random_connected_graph
from oracles import curvature_by_network_simplex, lazy
from ricciflat.catalog import named
from ricciflat.curvature import (
    CurvatureError,
    closed_form_off_short_cycles,
    critical_idleness,
    idleness_profile,
    is_ricci_flat,
    k_alpha,
    lazy_measure,
    lly_curvature,
    upper_bound_off_c3c4,
)
from ricciflat.graph import Graph, GraphError, cycle_membership


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])


class TestLazyMeasure:
    def test_masses(self):
        mu = lazy_measure(cycle(6), 0, Fraction(1, 3))
        assert mu.as_dict() == {0: Fraction(1, 3), 1: Fraction(1, 3), 5: Fraction(1, 3)}

    def test_zero_and_full_idleness(self):
        assert lazy_measure(cycle(6), 0, 0).support == [1, 5]
        assert lazy_measure(cycle(6), 0, 1).support == [0]

    def test_rejects_out_of_range_idleness(self):
        with pytest.raises(CurvatureError):
            lazy_measure(cycle(6), 0, Fraction(3, 2))

    def test_rejects_isolated_vertex(self):
        with pytest.raises(CurvatureError, match="isolated"):
            lazy_measure(Graph.from_edges(3, [(0, 1)]), 2, 0)


@pytest.mark.parametrize(
    "graph, expected",
    [
        (cycle(3), Fraction(3, 2)),
        (cycle(4), Fraction(1)),
        (cycle(5), Fraction(1, 2)),
        (cycle(6), Fraction(0)),
        (cycle(11), Fraction(0)),
        (complete(4), Fraction(4, 3)),
        (complete(5), Fraction(5, 4)),
        (Graph.from_edges(2, [(0, 1)]), Fraction(2)),
    ],
)
def test_vertex_transitive_examples(graph, expected):
    assert {lly_curvature(graph, e).k_star for e in graph.edges()} == {expected}


def test_path_edges():
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert lly_curvature(p3, (0, 1)).k_star == 1
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    # leaf against a degree-4 centre: 2/1 + 2/4 - 2
    assert lly_curvature(star, (0, 1)).k_star == Fraction(1, 2)


def test_petersen_and_dodecahedron_are_flat():
    for name in ("petersen", "dodecahedral"):
        assert is_ricci_flat(named(name)).flat


def test_non_edge_is_rejected():
    with pytest.raises(GraphError):
        lly_curvature(cycle(6), (0, 3))


def test_flatness_reports_first_witness():
    res = is_ricci_flat(cycle(5))
    assert not res.flat
    assert (res.witness.u, res.witness.v) == (0, 1)
    assert res.witness_k == Fraction(1, 2)
    assert len(res.reports) == 1
    assert len(is_ricci_flat(cycle(5), full=True).reports) == 5


def test_flatness_requires_connected_graph():
    with pytest.raises(CurvatureError, match="not connected"):
        is_ricci_flat(Graph.from_edges(4, [(0, 1), (2, 3)]))


def test_critical_idleness():
    assert critical_idleness(3, 4) == Fraction(1, 5)
    assert critical_idleness(2, 2) == Fraction(1, 3)


@given(connected_graphs(max_n=11))
def test_curvature_matches_network_simplex_oracle(g):
    for e in g.edges():
        assert lly_curvature(g, e).k_star == curvature_by_network_simplex(g, e.u, e.v)


@given(connected_graphs(max_n=10), st.integers(1, 19))
def test_normalised_k_alpha_is_constant_above_critical_idleness(g, step):
    e = g.edges()[0]
    r = lly_curvature(g, e)
    a = r.alpha_star + (1 - r.alpha_star) * Fraction(step, 20)
    assert k_alpha(g, e, a) / (1 - a) == r.k_star


@given(connected_graphs(max_n=10))
def test_report_certificate_is_consistent(g):
    for e in g.edges():
        r = lly_curvature(g, e, alphas=[Fraction(1, 2)])
        assert r.k_alpha_at[r.alpha_star] == 1 - r.certificate.value
        assert r.k_star == r.k_alpha_at[r.alpha_star] / (1 - r.alpha_star)
        assert Fraction(1, 2) in r.extra_certificates or r.alpha_star == Fraction(1, 2)


def test_closed_form_off_short_cycles():
    rng = random.Random(21)
    seen = 0
    for _ in range(250):
        g = random_connected_graph(rng, rng.randint(6, 14), extra=rng.choice([0.1, 0.3, 0.6]))
        for e in g.edges():
            flags = cycle_membership(g, e)
            if flags.in_c3 or flags.in_c4 or flags.in_c5:
                continue
            seen += 1
            assert lly_curvature(g, e).k_star == closed_form_off_short_cycles(g.degree(e.u), g.degree(e.v))
    assert seen > 200


def test_upper_bound_off_three_and_four_cycles():
    rng = random.Random(22)
    seen = 0
    for _ in range(250):
        g = random_connected_graph(rng, rng.randint(6, 14), extra=rng.choice([0.3, 0.6, 0.9]))
        for e in g.edges():
            flags = cycle_membership(g, e)
            if flags.in_c3 or flags.in_c4:
                continue
            seen += 1
            small, large = sorted((g.degree(e.u), g.degree(e.v)))
            assert lly_curvature(g, e).k_star <= upper_bound_off_c3c4(small, large)
    assert seen > 200


class TestIdlenessProfile:
    @given(connected_graphs(max_n=10), st.integers(0, 30))
    def test_profile_interpolates_k_alpha(self, g, step):
        e = g.edges()[-1]
        prof = idleness_profile(g, e)
        a = Fraction(step, 30)
        assert prof.value_at(a) == k_alpha(g, e, a)

    @given(connected_graphs(max_n=10))
    def test_shape(self, g):
        for e in g.edges():
            prof = idleness_profile(g, e)
            assert 1 <= prof.pieces <= 3
            assert prof.breakpoints[0] == 0 and prof.breakpoints[-1] == 1
            assert prof.values[-1] == 0
            assert prof.k_from_final_slope() == lly_curvature(g, e).k_star
            slopes = [s.slope for s in prof.segments]
            # concave: slopes never increase
            assert all(a > b for a, b in zip(slopes, slopes[1:]))
            lo, hi = prof.candidate_breaks
            assert all(lo <= b <= hi for b in prof.breakpoints[1:-1])
            if g.degree(e.u) == g.degree(e.v):
                assert prof.pieces <= 2

    def test_regular_edge_has_one_candidate_break(self):
        prof = idleness_profile(named("g8"), (0, 3))
        assert prof.candidate_breaks == (Fraction(1, 5), Fraction(1, 5))
        assert prof.pieces == 2
        assert prof.k_from_final_slope() == 0

    def test_middle_break_away_from_candidates(self):
        # (4,3) edge whose middle kink sits at 1/7, strictly between 1/13 and 1/5
        g = Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (1, 4), (1, 5), (2, 4), (3, 5), (4, 5)])
        prof = idleness_profile(g, (1, 2))
        assert prof.breakpoints == (0, Fraction(1, 7), Fraction(1, 5), 1)
        assert [s.slope for s in prof.segments] == [Fraction(3, 2), Fraction(1, 3), Fraction(-11, 12)]
        assert prof.values == (Fraction(1, 2), Fraction(5, 7), Fraction(11, 15), 0)

    def test_mixed_degrees(self):
        star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2)])
        prof = idleness_profile(star, (0, 1))
        assert prof.candidate_breaks == (Fraction(1, 7), Fraction(1, 4))


def test_lazy_oracle_agrees_with_package_measure():
    g = named("petersen")
    for a in (Fraction(0), Fraction(1, 4), Fraction(1)):
        assert lazy(g, 0, a) == lazy_measure(g, 0, a).as_dict()
