"""Graph construction, normalization and sparse propagation."""

import numpy as np
import pytest

from clenshaw_gnn import (
    PROP_ADJACENCY,
    PROP_LAPLACIAN,
    build_graph,
    eig_sym,
    laplacian,
    normalized_adjacency,
    read_edge_list,
    spmm,
)


def dense_adj(g):
    return g.to_dense()


class TestBuildGraph:
    def test_single_edge_symmetrized(self):
        g = build_graph([(0, 1)], n=2)
        assert g.nnz == 2
        a = dense_adj(g)
        np.testing.assert_array_equal(a, [[0, 1], [1, 0]])

    def test_duplicates_and_self_loops(self):
        g = build_graph([(0, 1), (1, 0), (2, 2)], n=3)
        assert g.nnz == 2
        assert dense_adj(g)[2, 2] == 0.0

    def test_triangle_enumeration(self):
        # hand enumeration: 3 undirected edges stored twice, all degrees 2
        g = build_graph([(0, 1), (1, 2), (0, 2)], n=3)
        assert g.nnz == 6
        np.testing.assert_array_equal(g.degrees(), [2, 2, 2])

    def test_first_weight_wins(self):
        g = build_graph([(0, 1, 3.0), (1, 0, 5.0)], n=2)
        assert dense_adj(g)[0, 1] == 3.0
        assert dense_adj(g)[1, 0] == 3.0

    def test_order_invariance(self):
        edges = [(0, 1), (1, 2), (0, 2), (2, 3), (1, 3)]
        g1 = build_graph(edges, n=4)
        g2 = build_graph(edges[::-1], n=4)
        np.testing.assert_array_equal(g1.rows, g2.rows)
        np.testing.assert_array_equal(g1.cols, g2.cols)
        np.testing.assert_array_equal(g1.vals, g2.vals)

    def test_columns_sorted_within_rows(self):
        rng = np.random.default_rng(0)
        iu, ju = np.triu_indices(15, k=1)
        keep = rng.random(iu.size) < 0.4
        g = build_graph(list(zip(iu[keep], ju[keep])), n=15)
        for u in range(g.n):
            nbrs = g.neighbors(u)
            assert np.all(np.diff(nbrs) > 0)

    def test_errors(self):
        with pytest.raises(ValueError):
            build_graph([(0, 5)], n=3)
        with pytest.raises(ValueError):
            build_graph([(-1, 0)], n=3)
        with pytest.raises(ValueError):
            build_graph([], n=0)


class TestNormalizedAdjacency:
    def test_triangle_all_third(self):
        p = normalized_adjacency(build_graph([(0, 1), (1, 2), (0, 2)], 3))
        np.testing.assert_allclose(p.to_dense(), np.full((3, 3), 1 / 3), atol=1e-15)
        assert p.kind == PROP_ADJACENCY

    def test_single_edge_half(self):
        p = normalized_adjacency(build_graph([(0, 1)], 2))
        np.testing.assert_allclose(p.to_dense(), np.full((2, 2), 0.5), atol=1e-15)

    def test_edgeless_is_identity(self):
        p = normalized_adjacency(build_graph([], 3))
        np.testing.assert_array_equal(p.to_dense(), np.eye(3))

    def test_isolated_node_gets_unit_diagonal(self):
        p = normalized_adjacency(build_graph([(0, 1)], 3))
        assert p.to_dense()[2, 2] == 1.0

    def test_weighted_entries(self):
        # entry (u,v) = w / sqrt((d_u+1)(d_v+1)) with weighted degrees
        g = build_graph([(0, 1, 2.0), (1, 2, 1.0)], 3)
        p = normalized_adjacency(g).to_dense()
        np.testing.assert_allclose(p[0, 1], 2.0 / np.sqrt(3.0 * 4.0))
        np.testing.assert_allclose(p[1, 1], 1.0 / 4.0)

    def test_symmetry_and_spectrum_bounds(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            n = int(rng.integers(2, 40))
            iu, ju = np.triu_indices(n, k=1)
            keep = rng.random(iu.size) < 0.2
            p = normalized_adjacency(build_graph(list(zip(iu[keep], ju[keep])), n))
            dense = p.to_dense()
            assert np.abs(dense - dense.T).max() <= 1e-12
            mu = eig_sym(dense).mu
            assert mu.min() >= -1.0 - 1e-9
            assert mu.max() <= 1.0 + 1e-9
            np.testing.assert_allclose(mu.max(), 1.0, atol=1e-9)

    def test_sqrt_degree_vector_is_top_eigenvector(self):
        rng = np.random.default_rng(5)
        iu, ju = np.triu_indices(30, k=1)
        keep = rng.random(iu.size) < 0.15
        g = build_graph(list(zip(iu[keep], ju[keep])), 30)
        p = normalized_adjacency(g)
        v = np.sqrt(g.degrees() + 1.0)
        residual = np.linalg.norm(p.to_dense() @ v - v) / np.linalg.norm(v)
        assert residual <= 1e-10


class TestLaplacian:
    def test_identity_gives_zero(self):
        lap = laplacian(normalized_adjacency(build_graph([], 3)))
        assert lap.kind == PROP_LAPLACIAN
        np.testing.assert_array_equal(lap.to_dense(), np.zeros((3, 3)))

    def test_triangle_values(self):
        lap = laplacian(normalized_adjacency(build_graph([(0, 1), (1, 2), (0, 2)], 3)))
        expected = np.full((3, 3), -1 / 3)
        np.fill_diagonal(expected, 2 / 3)
        np.testing.assert_allclose(lap.to_dense(), expected, atol=1e-15)

    def test_eigenvalue_relation(self):
        rng = np.random.default_rng(11)
        iu, ju = np.triu_indices(20, k=1)
        keep = rng.random(iu.size) < 0.2
        p = normalized_adjacency(build_graph(list(zip(iu[keep], ju[keep])), 20))
        mu = eig_sym(p.to_dense()).mu
        lam = eig_sym(laplacian(p).to_dense()).mu
        np.testing.assert_allclose(np.sort(1.0 - mu), np.sort(lam), atol=1e-10)

    def test_wrong_kind_rejected(self):
        lap = laplacian(normalized_adjacency(build_graph([(0, 1)], 2)))
        with pytest.raises(ValueError):
            laplacian(lap)


class TestSpmm:
    def test_identity_operator(self):
        p = normalized_adjacency(build_graph([], 4))
        h = np.arange(8.0).reshape(4, 2)
        np.testing.assert_array_equal(spmm(p, h), h)

    def test_triangle_row_means(self):
        p = normalized_adjacency(build_graph([(0, 1), (1, 2), (0, 2)], 3))
        h = np.array([[1.0], [2.0], [3.0]])
        np.testing.assert_allclose(spmm(p, h), [[2.0], [2.0], [2.0]], atol=1e-15)

    def test_matches_dense_product(self):
        rng = np.random.default_rng(17)
        iu, ju = np.triu_indices(20, k=1)
        keep = rng.random(iu.size) < 0.3
        p = normalized_adjacency(build_graph(list(zip(iu[keep], ju[keep])), 20))
        h = rng.standard_normal((20, 7))
        got = spmm(p, h)
        expected = p.to_dense() @ h
        rel = np.linalg.norm(got - expected) / np.linalg.norm(expected)
        assert rel <= 1e-13

    def test_dimension_mismatch(self):
        p = normalized_adjacency(build_graph([(0, 1)], 2))
        with pytest.raises(ValueError):
            spmm(p, np.zeros((3, 2)))


class TestEdgeListFile:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "edges.txt"
        path.write_text("# comment\n0 1\n1 2 2.5\n\n")
        edges = read_edge_list(path)
        assert edges == [(0, 1, 1.0), (1, 2, 2.5)]

    def test_parse_error_names_line(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 1\nnot an edge\n")
        with pytest.raises(ValueError, match=":2"):
            read_edge_list(path)
