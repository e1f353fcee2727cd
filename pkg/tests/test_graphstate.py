"""Adjacency-level graph operations."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multinet.graphstate import (
    ColoringError,
    Graph,
    GraphError,
    build_graph,
    color_graph,
    connect_project,
    from_text,
    local_complement,
    merge_vertices,
    to_text,
)



def graphs(max_vertices=8):
    @st.composite
    def build(draw):
        n = draw(st.integers(min_value=1, max_value=max_vertices))
        pairs = list(itertools.combinations(range(n), 2))
        mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
        return Graph(range(n), [e for e, keep in zip(pairs, mask) if keep])

    return build()


class TestInvariants:
    def test_rejects_self_edge(self):
        with pytest.raises(GraphError):
            Graph([0, 1], [(0, 0)])

    def test_rejects_unknown_vertex(self):
        with pytest.raises(GraphError):
            Graph([0, 1], [(0, 2)])

    def test_rejects_improper_coloring(self):
        with pytest.raises(GraphError):
            Graph([0, 1], [(0, 1)], coloring={0: 0, 1: 0})

    def test_adjacency_is_symmetric(self):
        g = Graph(range(3), [(0, 1), (1, 2)])
        for a, b in g.edges():
            assert g.has_edge(b, a)


class TestGenerators:
    def test_ghz_star_degrees(self):
        g = build_graph("ghz-star", s=3)
        assert g.degree(0) == 2
        assert g.degree(1) == g.degree(2) == 1

    def test_small_open_lattice(self):
        g = build_graph("lattice2d", w=2, h=2, periodic=False)
        assert g.vertex_count == 4
        assert g.edge_count() == 4

    def test_periodic_lattice_is_regular(self):
        g = build_graph("lattice2d", w=64, h=64, periodic=True)
        assert g.vertex_count == 4096
        assert g.edge_count() == 8192
        assert all(g.degree(v) == 4 for v in g.vertices())

    def test_periodic_3d(self):
        g = build_graph("lattice3d", w=4, h=4, d=4, periodic=True)
        assert g.edge_count() == 3 * 64
        assert all(g.degree(v) == 6 for v in g.vertices())

    def test_zero_dimension_rejected(self):
        with pytest.raises(GraphError):
            build_graph("lattice2d", w=0, h=3)

    def test_unknown_generator(self):
        with pytest.raises(GraphError):
            build_graph("moebius")


class TestLocalComplement:
    def test_line_becomes_triangle(self):
        g = build_graph("line", n=3)
        assert local_complement(g, 1).edges() == [(0, 1), (0, 2), (1, 2)]

    def test_triangle_loses_far_edge(self):
        tri = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
        assert local_complement(tri, 0).edges() == [(0, 1), (0, 2)]

    @settings(max_examples=50, deadline=None)
    @given(graphs(), st.data())
    def test_involution(self, g, data):
        v = data.draw(st.integers(min_value=0, max_value=g.vertex_count - 1))
        assert local_complement(local_complement(g, v), v) == Graph(
            g.vertices(), g.edges()
        )

    def test_out_of_range(self):
        with pytest.raises(GraphError):
            local_complement(build_graph("line", n=2), 5)


class TestMerge:
    def test_bell_chain_swaps(self):
        g = build_graph("line", n=3)
        assert merge_vertices(g, 0, 1).edges() == [(0, 2)]

    def test_star_fusion_at_centers(self):
        two = Graph(range(6), [(0, 1), (0, 2), (3, 4), (3, 5)])
        merged = merge_vertices(two, 0, 3)
        assert merged.edges() == [(0, 1), (0, 2), (0, 4), (0, 5)]

    def test_merge_self_rejected(self):
        with pytest.raises(GraphError):
            merge_vertices(build_graph("line", n=2), 0, 0)

    def test_ids_are_stable(self):
        g = build_graph("line", n=4)
        out = merge_vertices(g, 1, 2)
        assert out.vertices() == [0, 1, 3]

    def test_long_bell_chain_collapses_to_endpoint_edge(self):
        # chaining merges over a path of Bell pairs = entanglement swapping
        for length in range(2, 33):
            g = build_graph("line", n=length + 1)
            for mid in range(1, length):
                g = merge_vertices(g, 0, mid)
            assert g.edges() == [(0, length)]

    @settings(max_examples=50, deadline=None)
    @given(graphs(), st.data())
    def test_output_is_simple_graph(self, g, data):
        if g.vertex_count < 2:
            return
        a, b = data.draw(
            st.lists(
                st.integers(min_value=0, max_value=g.vertex_count - 1),
                min_size=2,
                max_size=2,
                unique=True,
            )
        )
        out = merge_vertices(g, a, b)
        assert not out.has_vertex(b)
        for u, v in out.edges():
            assert u != v and out.has_edge(v, u)


class TestConnect:
    def test_two_bell_pairs(self):
        g = Graph(range(4), [(0, 1), (2, 3)])
        assert connect_project(g, 1, 2).edges() == [(0, 3)]

    def test_two_ghz_stars_give_double_size(self):
        g = Graph(range(6), [(0, 1), (0, 2), (3, 4), (3, 5)])
        out = connect_project(g, 2, 4)
        assert out.vertices() == [0, 1, 3, 5]
        assert out.edge_count() == 3  # a connected 4-vertex tree

    def test_adjacent_pair_rejected(self):
        with pytest.raises(GraphError):
            connect_project(build_graph("line", n=2), 0, 1)

    @settings(max_examples=50, deadline=None)
    @given(graphs(), st.data())
    def test_output_is_simple_graph(self, g, data):
        non_adjacent = [
            (a, b)
            for a, b in itertools.combinations(g.vertices(), 2)
            if not g.has_edge(a, b)
        ]
        if not non_adjacent:
            return
        a, b = data.draw(st.sampled_from(non_adjacent))
        out = connect_project(g, a, b)
        assert not out.has_vertex(a) and not out.has_vertex(b)
        for u, v in out.edges():
            assert u != v and out.has_edge(v, u)


class TestColoring:
    def test_star_two_colors(self):
        g = build_graph("ghz-star", s=3)
        assert color_graph(g) == {0: 0, 1: 1, 2: 1}

    def test_large_torus_checkerboard(self):
        g = build_graph("lattice2d", w=64, h=64, periodic=True)
        coloring = color_graph(g)
        assert set(coloring.values()) == {0, 1}
        for a, b in g.edges():
            assert coloring[a] != coloring[b]

    def test_triangle_not_two_colorable(self):
        tri = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(ColoringError):
            color_graph(tri, max_colors=2)
        assert len(set(color_graph(tri, max_colors=3).values())) == 3

    def test_deterministic(self):
        g = Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
        assert color_graph(g, max_colors=3) == color_graph(g, max_colors=3)


class TestSerialization:
    def test_round_trip(self):
        g = build_graph("ghz-star", s=4)
        g.coloring = color_graph(g)
        back = from_text(to_text(g))
        assert back == g

    def test_parse_error_reports_line(self):
        with pytest.raises(GraphError, match="line 2"):
            from_text("graph 2\nexyz\n")

    def test_missing_header(self):
        with pytest.raises(GraphError, match="header"):
            from_text("e 0 1\n")

    def test_tombstoned_graph_serializes_densely(self):
        g = merge_vertices(build_graph("line", n=3), 0, 1)
        assert to_text(g) == "graph 2\ne 0 1\n"
