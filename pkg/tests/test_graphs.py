import numpy as np
import pytest

from ergmwell.graphs import (
    GraphState,
    InvalidEdgeError,
    edge_index,
    edge_pair,
    num_edges,
    sample_er,
)


class TestEdgeIndexing:
    def test_first_pair(self):
        assert edge_index(0, 1, 4) == 0

    def test_last_pair_n4(self):
        assert edge_pair(5, 4) == (2, 3)

    def test_round_trip_n10(self):
        n = 10
        for k in range(num_edges(n)):
            u, v = edge_pair(k, n)
            assert u < v
            assert edge_index(u, v, n) == k

    def test_lexicographic_order(self):
        n = 6
        pairs = [edge_pair(k, n) for k in range(num_edges(n))]
        assert pairs == sorted(pairs)

    def test_swapped_endpoints_agree(self):
        assert edge_index(3, 1, 5) == edge_index(1, 3, 5)

    @pytest.mark.parametrize("u,v", [(2, 2), (-1, 3), (0, 4)])
    def test_invalid_edges(self, u, v):
        with pytest.raises(InvalidEdgeError):
            edge_index(u, v, 4)

    def test_index_out_of_range(self):
        with pytest.raises(InvalidEdgeError):
            edge_pair(6, 4)


class TestMutation:
    def test_single_edge(self):
        g = GraphState(3)
        g.set_edge(0, 1, True)
        assert list(g.deg) == [1, 1, 0]
        assert g.edge_count == 1

    def test_set_unset_is_involution(self):
        g = sample_er(6, 0.5, np.random.default_rng(3))
        snapshot = g.copy()
        had = g.has_edge(2, 4)
        g.set_edge(2, 4, not had)
        g.set_edge(2, 4, had)
        assert g == snapshot
        assert g.bits() == snapshot.bits()

    def test_set_is_idempotent(self):
        g = GraphState(4)
        g.set_edge(0, 3, True)
        g.set_edge(0, 3, True)
        assert g.edge_count == 1 and g.degree(0) == 1

    def test_random_toggles_keep_caches_consistent(self):
        rng = np.random.default_rng(20)
        g = GraphState(20)
        m = num_edges(20)
        for _ in range(10_000):
            k = int(rng.integers(m))
            u = 0
            # decode via the library inverse to exercise it too
            from ergmwell.graphs import edge_pair

            u, v = edge_pair(k, 20)
            g.set_edge(u, v, bool(rng.integers(2)))
        g.check_consistent()

    def test_loop_rejected(self):
        g = GraphState(4)
        with pytest.raises(InvalidEdgeError):
            g.set_edge(2, 2, True)


class TestSampling:
    def test_p_zero_empty(self):
        g = sample_er(10, 0.0, np.random.default_rng(0))
        assert g.edge_count == 0

    def test_p_one_complete(self):
        g = sample_er(10, 1.0, np.random.default_rng(0))
        assert g.edge_count == num_edges(10)

    def test_mean_edge_count(self):
        # 1000 samples at n=50, p=0.5: Binomial(1225, 0.5) mean within 3 SE
        rng = np.random.default_rng(42)
        total = sum(sample_er(50, 0.5, rng).edge_count for _ in range(1000))
        mean = total / 1000
        se = np.sqrt(1225 * 0.25 / 1000)
        assert abs(mean - 612.5) < 3 * se

    def test_bad_probability(self):
        with pytest.raises(ValueError):
            sample_er(5, 1.5, np.random.default_rng(0))


class TestMetrics:
    def test_hamming_self_zero(self):
        g = sample_er(8, 0.5, np.random.default_rng(1))
        assert g.hamming_to(g) == 0

    def test_hamming_empty_vs_complete(self):
        empty = GraphState(4)
        full = GraphState.from_adjacency(1 - np.eye(4))
        assert empty.hamming_to(full) == 6

    def test_hamming_size_mismatch(self):
        with pytest.raises(InvalidEdgeError):
            GraphState(4).hamming_to(GraphState(5))

    def test_common_neighbors_path(self):
        # path 0 - 2 - 1: the endpoints share exactly the middle vertex
        g = GraphState(3)
        g.set_edge(0, 2, True)
        g.set_edge(1, 2, True)
        assert g.common_neighbors(0, 1) == 1

    def test_common_neighbors_excludes_endpoints(self):
        g = GraphState.from_adjacency(1 - np.eye(4))
        # in K4, u and v share everyone but themselves
        assert g.common_neighbors(0, 1) == 2

    def test_from_bits_round_trip(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            g = sample_er(6, 0.5, rng)
            assert GraphState.from_bits(g.bits(), 6) == g
