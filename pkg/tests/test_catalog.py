from __future__ import annotations

from collections import Counter
from itertools import combinations

import networkx as nx
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from oracles import to_nx
from ricciflat.canon import are_isomorphic, canonical_certificate
from ricciflat.catalog import (
    EXCLUDED,
    FAMILIES,
    NAMED,
    PATCH_MARGIN,
    CatalogError,
    FamilySpec,
    Patch,
    catalog_entries,
    certified_edges,
    certify_patch,
    default_family_grid,
    excluded_configuration,
    family,
    line_graph,
    named,
)
from ricciflat.curvature import is_ricci_flat, lly_curvature

# (vertices, edges, degree histogram, girth, diameter), cross-checked with networkx
SHAPES = {
    "petersen": (10, 15, {3: 10}, 5, 2),
    "dodecahedral": (20, 30, {3: 20}, 5, 5),
    "half_dodecahedral": (15, 20, {2: 5, 3: 10}, 5, 5),
    "triplex": (12, 18, {3: 12}, 5, 3),
    "g1": (13, 21, {2: 3, 3: 4, 4: 6}, 3, 3),
    "g2": (12, 18, {2: 4, 3: 4, 4: 4}, 4, 4),
    "g3": (20, 38, {3: 4, 4: 16}, 4, 4),
    "g4": (20, 38, {3: 4, 4: 16}, 4, 4),
    "g5": (12, 18, {2: 6, 4: 6}, 3, 3),
    "g6": (15, 24, {2: 6, 4: 9}, 3, 4),
    "g7_icosidodecahedron": (30, 60, {4: 30}, 3, 5),
    "g8": (14, 20, {2: 8, 4: 6}, 4, 4),
    "figure32": (12, 20, {2: 4, 4: 8}, 4, 3),
}

CERTIFICATES = {
    "petersen": "000a0394ca464900",
    "triplex": "000c00e14944ca60448000",
    "g5": "000c006028285146069300",
    "g8": "000e0028048110840c144a266000",
    "figure32": "000c00612122406ab92500",
}


@pytest.mark.parametrize("name", sorted(SHAPES))
def test_named_shape(name):
    g = named(name)
    h = to_nx(g)
    n, m, degrees, girth, diameter = SHAPES[name]
    assert (g.n, g.num_edges) == (n, m)
    assert dict(Counter(d for _, d in h.degree())) == degrees
    assert nx.girth(h) == girth
    assert nx.diameter(h) == diameter


@pytest.mark.parametrize("name", sorted(NAMED))
def test_named_graphs_are_flat(name):
    g = named(name)
    res = is_ricci_flat(g, full=True)
    assert res.flat
    assert all(r.k_star == 0 for r in res.reports)
    assert len(res.reports) == g.num_edges


def test_classical_graphs_match_networkx():
    assert nx.is_isomorphic(to_nx(named("petersen")), nx.petersen_graph())
    assert nx.is_isomorphic(to_nx(named("dodecahedral")), nx.dodecahedral_graph())
    icosidodecahedron = nx.line_graph(nx.dodecahedral_graph())
    assert nx.is_isomorphic(to_nx(named("g7_icosidodecahedron")), icosidodecahedron)


def test_line_graph_of_petersen():
    lg = line_graph(named("petersen"))
    assert nx.is_isomorphic(to_nx(lg), nx.line_graph(nx.petersen_graph()))


def test_named_graphs_are_pairwise_distinct():
    graphs = {name: named(name) for name in NAMED}
    for a, b in combinations(sorted(graphs), 2):
        assert not are_isomorphic(graphs[a], graphs[b]), (a, b)


@pytest.mark.parametrize("name", sorted(CERTIFICATES))
def test_certificate_snapshots(name):
    assert canonical_certificate(named(name)) == CERTIFICATES[name]


def test_unknown_name():
    with pytest.raises(CatalogError, match="unknown named graph 'k4'"):
        named("k4")


def test_catalog_entries_list_names_then_families():
    entries = catalog_entries()
    assert entries[: len(NAMED)] == list(NAMED)
    assert entries[len(NAMED) :] == [f"family:{f}" for f in FAMILIES]


class TestFamilySpec:
    @pytest.mark.parametrize(
        "text",
        [
            "family=lattice4 glue=klein length=6 width=7 mode=quotient",
            "family=c4_chain length=3 mode=quotient",
            "family=c4_grid_band length=2 mode=patch radius=9",
        ],
    )
    def test_round_trip(self, text):
        spec = FamilySpec.parse(text)
        assert spec.text() == text
        assert FamilySpec.parse(spec.text()) == spec

    def test_defaults(self):
        spec = FamilySpec.parse("family=c4c4_strip length=8")
        assert spec.mode == "quotient" and spec.params == {"length": 8}

    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("length=3", "needs family="),
            ("family=hexagonal", "unknown family"),
            ("family=c4_chain length", "expected key=value"),
            ("family=c4_chain length=1 length=2", "repeated key"),
            ("family=c4_chain mode=ring", "mode must be"),
            ("family=c4_chain mode=patch", "positive radius"),
        ],
    )
    def test_parse_errors(self, text, fragment):
        with pytest.raises(CatalogError, match=fragment):
            FamilySpec.parse(text)


class TestFamilyErrors:
    @pytest.mark.parametrize(
        "text, fragment",
        [
            ("family=c4_chain length=0", "c4_chain"),
            ("family=c4c4_strip length=5", "length 5 < 6"),
            ("family=lattice4 length=5 width=6", "length >= 6 and width >= 6, got 5 x 6"),
            ("family=lattice4 length=6 width=6 glue=mobius", "unknown glue"),
            ("family=c4_grid_band length=2 width=4 glue=cyclic", "width"),
            ("family=c4_grid_band length=2 width=7 glue=cyclic", "even width"),
            ("family=c4_grid_band length=2 width=8 glue=mobius", "width \\+ length odd"),
            ("family=c4_grid_band length=0 width=6", "length >= 1"),
            ("family=c4_chain length=2 width=3", "does not take"),
            ("family=c4_chain length=two", "must be an integer"),
            ("family=type_c mode=patch radius=5", "finite"),
        ],
    )
    def test_invalid_parameters(self, text, fragment):
        with pytest.raises(CatalogError, match=fragment):
            family(FamilySpec.parse(text))


def test_grid_quotients_are_flat_and_in_degree_range():
    grid = default_family_grid()
    assert len(grid) == 63
    for spec in grid:
        g = family(spec)
        assert max(g.degree(v) for v in range(g.n)) <= 4
        assert min(g.degree(v) for v in range(g.n)) >= 2
        assert is_ricci_flat(g).flat, spec.text()


def test_family_sizes():
    sizes = {
        "family=c4_chain length=1": 9,
        "family=c4_chain length=4": 18,
        "family=c4c4_strip length=6": 12,
        "family=lattice4 length=6 width=7 glue=twist": 42,
        "family=c4_grid_band length=3 width=8 glue=cyclic": 20,
        "family=type_c": 20,
    }
    for text, n in sizes.items():
        assert family(FamilySpec.parse(text)).n == n


def test_strip_quotient_is_lexicographic_product():
    # C_m[2K1]: each cycle vertex doubled, twins joined to both twins of each neighbour
    for m in (6, 7, 9):
        ours = to_nx(family(FamilySpec.parse(f"family=c4c4_strip length={m}")))
        ref = nx.lexicographic_product(nx.cycle_graph(m), nx.empty_graph(2))
        assert nx.is_isomorphic(ours, ref)


def test_torus_quotient_is_grid_product():
    ours = to_nx(family(FamilySpec.parse("family=lattice4 length=6 width=7 glue=torus")))
    assert nx.is_isomorphic(ours, nx.cartesian_product(nx.cycle_graph(6), nx.cycle_graph(7)))


def test_band_of_length_one_is_the_chain():
    chain = family(FamilySpec.parse("family=c4_chain length=2"))
    band = family(FamilySpec.parse("family=c4_grid_band length=1 width=8 glue=cyclic"))
    assert canonical_certificate(chain) == canonical_certificate(band)


class TestPatches:
    def test_chain_patch_certifies_flat(self):
        p = family(FamilySpec("c4_chain", mode="patch", radius=10))
        assert isinstance(p, Patch)
        cert = certify_patch(p)
        assert p.graph.n == 31
        assert len(cert.certified_edges) == 16
        assert cert.flat_on_certified and cert.nonflat == []

    def test_lattice_patch_certifies_flat(self):
        p = family(FamilySpec("lattice4", mode="patch", radius=10))
        cert = certify_patch(p)
        assert p.graph.n == 221
        assert len(cert.certified_edges) == 64
        assert cert.flat_on_certified

    @pytest.mark.parametrize(
        "text", ["family=c4c4_strip mode=patch radius=9", "family=c4_grid_band length=2 mode=patch radius=10"]
    )
    def test_other_patches(self, text):
        assert certify_patch(family(FamilySpec.parse(text))).flat_on_certified

    def test_boundary_edges_can_be_curved(self):
        # the margin matters: some uncertified edge near the boundary is not flat
        p = family(FamilySpec("lattice4", mode="patch", radius=10))
        inner = set(certified_edges(p))
        outer = [e for e in p.graph.edges() if e not in inner]
        assert any(lly_curvature(p.graph, e).k_star != 0 for e in outer)

    @pytest.mark.parametrize("radius", [2, 5])
    def test_small_radius_is_rejected(self, radius):
        p = family(FamilySpec("lattice4", mode="patch", radius=radius))
        with pytest.raises(CatalogError, match=f"no certifiable edge.*{PATCH_MARGIN}-ball"):
            certify_patch(p)

    def test_keys_and_base_edge(self):
        p = family(FamilySpec("c4_chain", mode="patch", radius=3))
        assert p.keys[0] == ("h", 0)
        assert p.graph.has_edge(p.base_edge.u, p.base_edge.v)
        assert all(p.graph.degree(v) == (4 if p.keys[v][0] == "h" else 2) for v in range(p.graph.n) if v not in p.boundary)


class TestExcludedConfigurations:
    @pytest.mark.parametrize("name", sorted(EXCLUDED))
    def test_not_flat(self, name):
        assert not is_ricci_flat(excluded_configuration(name)).flat

    def test_unknown(self):
        with pytest.raises(CatalogError, match="unknown configuration"):
            excluded_configuration("type_z")

    @pytest.mark.parametrize("name", sorted(EXCLUDED))
    def test_never_embedded_with_its_edge_degrees_in_a_flat_graph(self, name):
        pattern = excluded_configuration(name)
        p = to_nx(pattern)
        hosts = [named(n) for n in NAMED] + [family(s) for s in default_family_grid()]
        for g in hosts:
            if g.n > 30:
                continue
            for m in GraphMatcher(to_nx(g), p).subgraph_monomorphisms_iter():
                inv = {b: a for a, b in m.items()}
                assert not all(g.degree(inv[v]) == pattern.degree(v) for v in (0, 1))
