import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from castree.graph import (
    Graph,
    ParseError,
    ReportSet,
    bfs_distances,
    bfs_forest,
    bfs_matrix,
    excluding_shortest_path,
    extended_excluding_shortest_path,
    parse_edge_list,
    parse_edge_list_with_stats,
    parse_labeled_edge_list,
    parse_report_file,
)

from bruteforce import excluding_distance
from conftest import cycle_graph, graph_of, path_graph, reports


class TestParse:
    def test_two_edges(self):
        g = parse_edge_list("0 1\n1 2")
        assert g.node_count == 3
        assert g.edge_count == 2

    def test_drops_duplicates_and_loops(self):
        g, dups, loops = parse_edge_list_with_stats("# c\n0 1\n0 1\n1 1")
        assert g.node_count == 2
        assert g.edge_count == 1
        assert dups == 1
        assert loops == 1

    def test_path_degrees(self):
        g = parse_edge_list("0 1\n1 2\n2 3\n3 4")
        assert g.node_count == 5
        assert g.edge_count == 4
        assert [g.degree(i) for i in range(5)] == [1, 2, 2, 2, 1]

    def test_nodes_header(self):
        g = parse_edge_list("# nodes: 6\n0 1")
        assert g.node_count == 6
        assert g.degree(5) == 0

    def test_reversed_duplicates_collapse(self):
        g, dups, _ = parse_edge_list_with_stats("0 1\n1 0")
        assert g.edge_count == 1
        assert dups == 1

    def test_malformed_line_reports_number(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_edge_list("0 1\n0 x")
        with pytest.raises(ParseError, match="line 3"):
            parse_edge_list("0 1\n1 2\n3")

    def test_empty_input(self):
        with pytest.raises(ParseError):
            parse_edge_list("")

    def test_header_smaller_than_max_id(self):
        with pytest.raises(ParseError):
            parse_edge_list("# nodes: 2\n0 5")

    def test_labeled_loader_remaps(self):
        g, labels = parse_labeled_edge_list("100 200\n200 a")
        assert g.node_count == 3
        assert labels == ["100", "200", "a"]
        assert g.has_edge(0, 1) and g.has_edge(1, 2)

    def test_adjacency_sorted_and_consistent(self):
        g = graph_of(4, [(2, 0), (3, 1), (0, 1)])
        assert list(g.neighbors(0)) == [1, 2]
        edge_set = g.edge_set()
        for u in range(4):
            for v in g.neighbors(u):
                assert (min(u, int(v)), max(u, int(v))) in edge_set


class TestReportSet:
    def test_derived_fields(self):
        r = reports((5, 2.0), (3, 1.0), (7, 4.0))
        assert r.k == 3
        assert r.t0 == 1.0
        assert r.nodes_at(2.0) == {5}
        assert r.chronological() == [3, 5, 7]

    def test_rejects_duplicates_and_empty(self):
        with pytest.raises(ValueError):
            reports((1, 0.0), (1, 2.0))
        with pytest.raises(ValueError):
            ReportSet(())

    def test_report_file_roundtrip(self, tmp_path):
        r = reports((3, 1.5), (0, 0.0))
        path = tmp_path / "r.tsv"
        with open(path, "w") as f:
            from castree.graph import write_report_file
            write_report_file(r, f)
        assert parse_report_file(path.read_text()) == r

    def test_report_file_errors(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_report_file("nope")
        with pytest.raises(ParseError):
            parse_report_file("")


class TestExcludingPath:
    def test_unique_path(self):
        g = path_graph(5)
        r = reports((0, 0.0), (4, 1.0))
        assert excluding_shortest_path(g, r, 0, 4) == [0, 1, 2, 3, 4]

    def test_blocked_by_interior_terminal(self):
        g = path_graph(5)
        r = reports((0, 0.0), (2, 0.5), (4, 1.0))
        assert excluding_shortest_path(g, r, 0, 4) is None

    def test_cycle_tie_break(self):
        g = cycle_graph(6)
        r = reports((0, 0.0), (3, 1.0))
        assert excluding_shortest_path(g, r, 0, 3) == [0, 1, 2, 3]

    def test_contract_violations(self):
        g = path_graph(3)
        r = reports((0, 0.0), (2, 1.0))
        with pytest.raises(ValueError):
            excluding_shortest_path(g, r, 0, 1)  # 1 not reported
        with pytest.raises(ValueError):
            excluding_shortest_path(g, r, 0, 0)


class TestExtendedPath:
    def test_zero_length(self):
        g = path_graph(3)
        r = reports((1, 5.0), (2, 5.0))
        assert extended_excluding_shortest_path(g, r, 2, 2) == [2]

    def test_same_timestamp_interior_allowed(self):
        g = path_graph(3)
        r = reports((1, 5.0), (2, 5.0))
        assert extended_excluding_shortest_path(g, r, 0, 2) == [0, 1, 2]

    def test_different_timestamp_interior_blocks(self):
        g = path_graph(3)
        r = reports((1, 1.0), (2, 5.0))
        assert extended_excluding_shortest_path(g, r, 0, 2) is None

    def test_target_must_be_reported(self):
        g = path_graph(3)
        r = reports((2, 5.0),)
        with pytest.raises(ValueError):
            extended_excluding_shortest_path(g, r, 0, 1)


@st.composite
def graph_and_reports(draw):
    n = draw(st.integers(min_value=2, max_value=9))
    all_pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(all_pairs), min_size=1,
                          max_size=len(all_pairs), unique=True))
    k = draw(st.integers(min_value=2, max_value=min(4, n)))
    nodes = draw(st.permutations(range(n)))[:k]
    times = draw(st.lists(st.integers(min_value=0, max_value=5),
                          min_size=k, max_size=k))
    return (graph_of(n, edges),
            reports(*[(u, float(t)) for u, t in zip(nodes, times)]))


class TestBfsMatrix:
    @settings(max_examples=100, deadline=None)
    @given(graph_and_reports())
    def test_rows_equal_single_source_bfs(self, gr):
        g, r = gr
        sources = sorted(r.node_set)
        for mask in (None, ~r.node_mask(g.node_count)):
            dist_m, par_m = bfs_matrix(g, sources, expandable=mask)
            for i, u in enumerate(sources):
                dist, par = bfs_forest(g, [u], expandable=mask)
                assert np.array_equal(dist_m[i], dist)
                assert np.array_equal(par_m[i], par)


class TestPathProperties:
    @settings(max_examples=200, deadline=None)
    @given(graph_and_reports())
    def test_symmetry_dominance_lower_bound(self, gr):
        g, r = gr
        term = sorted(r.node_set)
        u, v = term[0], term[1]
        p_uv = excluding_shortest_path(g, r, u, v)
        p_vu = excluding_shortest_path(g, r, v, u)
        # symmetry of the excluding distance
        assert (p_uv is None) == (p_vu is None)
        if p_uv is not None:
            assert len(p_uv) == len(p_vu)
            # never shorter than the unconstrained BFS distance
            assert len(p_uv) - 1 >= bfs_distances(g, u)[v]
        # the extended variant relaxes the exclusion set
        ext = extended_excluding_shortest_path(g, r, u, v)
        if p_uv is not None:
            assert ext is not None and len(ext) <= len(p_uv)
        # against the brute-force oracle
        expected = excluding_distance(
            g.node_count, [tuple(e) for e in g.edges], r.node_set, u, v)
        assert (None if p_uv is None else len(p_uv) - 1) == expected

    @settings(max_examples=50, deadline=None)
    @given(graph_and_reports())
    def test_determinism(self, gr):
        g, r = gr
        term = sorted(r.node_set)
        u, v = term[0], term[1]
        assert (excluding_shortest_path(g, r, u, v)
                == excluding_shortest_path(g, r, u, v))
        assert (extended_excluding_shortest_path(g, r, v, u)
                == extended_excluding_shortest_path(g, r, v, u))

    @settings(max_examples=100, deadline=None)
    @given(graph_and_reports())
    def test_path_validity(self, gr):
        g, r = gr
        term = sorted(r.node_set)
        u, v = term[0], term[1]
        p = excluding_shortest_path(g, r, u, v)
        if p is not None:
            assert p[0] == u and p[-1] == v
            for a, b in zip(p, p[1:]):
                assert g.has_edge(a, b)
            assert not (set(p[1:-1]) & r.node_set)
        pe = extended_excluding_shortest_path(g, r, v, u)
        if pe is not None:
            assert pe[0] == v and pe[-1] == u
            for a, b in zip(pe, pe[1:]):
                assert g.has_edge(a, b)
            inner_reported = set(pe[1:-1]) & r.node_set
            assert all(r.time_of[w] == r.time_of[u] for w in inner_reported)
