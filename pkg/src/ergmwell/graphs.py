"""Dense simple-graph state on labeled vertices with cached degrees.

Graphs live on vertex set {0, ..., n-1} and are stored as a symmetric
uint8 adjacency matrix with a zero diagonal.  Degree and edge-count
caches are maintained incrementally so that the Glauber update loop
never rescans the matrix.  Edges are canonically identified with pairs
(u, v), u < v, and with linear indices 0 <= k < n(n-1)/2 in
lexicographic order.
"""

from __future__ import annotations

import numpy as np


class InvalidEdgeError(ValueError):
    """Raised for loops, out-of-range vertices, or mismatched sizes."""


def num_edges(n: int) -> int:
    """Number of potential edges on n vertices."""
    return n * (n - 1) // 2


def edge_index(u: int, v: int, n: int) -> int:
    """Linear index of the edge {u, v}, lexicographic in (min, max)."""
    if u > v:
        u, v = v, u
    if u == v or u < 0 or v >= n:
        raise InvalidEdgeError(f"invalid edge ({u}, {v}) on {n} vertices")
    return u * (n - 1) - u * (u - 1) // 2 + (v - u - 1)


def edge_pair(k: int, n: int) -> tuple[int, int]:
    """Inverse of edge_index: the pair (u, v) with u < v at linear index k."""
    if not 0 <= k < num_edges(n):
        raise InvalidEdgeError(f"edge index {k} out of range for n={n}")
    u = 0
    # Row u covers indices [offset, offset + n-1-u).
    offset = 0
    while k >= offset + (n - 1 - u):
        offset += n - 1 - u
        u += 1
    return u, k - offset + u + 1


def edge_endpoints(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays U, V with (U[k], V[k]) the endpoints of linear edge k."""
    iu = np.triu_indices(n, k=1)
    return iu[0].astype(np.int64), iu[1].astype(np.int64)


class GraphState:
    """Mutable simple graph with O(1) edge access and cached degrees."""

    __slots__ = ("n", "adj", "deg", "edge_count")

    def __init__(self, n: int):
        if n < 1:
            raise ValueError("vertex count must be >= 1")
        self.n = n
        self.adj = np.zeros((n, n), dtype=np.uint8)
        self.deg = np.zeros(n, dtype=np.int64)
        self.edge_count = 0

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "GraphState":
        """Wrap an existing 0/1 symmetric matrix (copied, diagonal cleared)."""
        adj = np.asarray(adj)
        n = adj.shape[0]
        if adj.shape != (n, n):
            raise ValueError("adjacency must be square")
        g = cls(n)
        a = (adj != 0).astype(np.uint8)
        np.fill_diagonal(a, 0)
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        g.adj = a
        g.deg = a.sum(axis=1, dtype=np.int64)
        g.edge_count = int(g.deg.sum()) // 2
        return g

    @classmethod
    def from_bits(cls, bits: int, n: int) -> "GraphState":
        """Graph whose linear-indexed edges are the set bits of ``bits``."""
        g = cls(n)
        k = 0
        for u in range(n):
            for v in range(u + 1, n):
                if (bits >> k) & 1:
                    g.set_edge(u, v, True)
                k += 1
        return g

    def _check(self, u: int, v: int) -> None:
        if u == v or min(u, v) < 0 or max(u, v) >= self.n:
            raise InvalidEdgeError(f"invalid edge ({u}, {v}) on {self.n} vertices")

    def has_edge(self, u: int, v: int) -> bool:
        self._check(u, v)
        return bool(self.adj[u, v])

    def set_edge(self, u: int, v: int, present: bool) -> None:
        """Set edge {u, v} to the given value, updating caches; idempotent."""
        self._check(u, v)
        old = self.adj[u, v]
        new = np.uint8(1 if present else 0)
        if old == new:
            return
        self.adj[u, v] = new
        self.adj[v, u] = new
        d = 1 if present else -1
        self.deg[u] += d
        self.deg[v] += d
        self.edge_count += d

    def degree(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise InvalidEdgeError(f"vertex {v} out of range")
        return int(self.deg[v])

    def common_neighbors(self, u: int, v: int) -> int:
        """|N(u) ∩ N(v)|; u and v never count themselves (zero diagonal)."""
        self._check(u, v)
        return int(np.dot(self.adj[u], self.adj[v]))

    def hamming_to(self, other: "GraphState") -> int:
        """Number of potential edges on which the two graphs differ."""
        if self.n != other.n:
            raise InvalidEdgeError("hamming distance needs equal vertex counts")
        return int(np.sum(self.adj != other.adj)) // 2

    def bits(self) -> int:
        """Pack edges into an integer in linear-index bit order."""
        iu, iv = np.triu_indices(self.n, k=1)
        out = 0
        for k, bit in enumerate(self.adj[iu, iv]):
            if bit:
                out |= 1 << k
        return out

    def copy(self) -> "GraphState":
        g = GraphState.__new__(GraphState)
        g.n = self.n
        g.adj = self.adj.copy()
        g.deg = self.deg.copy()
        g.edge_count = self.edge_count
        return g

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GraphState)
            and self.n == other.n
            and np.array_equal(self.adj, other.adj)
        )

    def __repr__(self) -> str:
        return f"GraphState(n={self.n}, edges={self.edge_count})"

    def check_consistent(self) -> None:
        """Recompute caches from the adjacency matrix and compare."""
        assert np.array_equal(self.adj, self.adj.T)
        assert not self.adj.diagonal().any()
        deg = self.adj.sum(axis=1, dtype=np.int64)
        assert np.array_equal(deg, self.deg)
        assert int(deg.sum()) // 2 == self.edge_count


def sample_er(n: int, p: float, rng: np.random.Generator) -> GraphState:
    """Graph with each edge present independently with probability p.

    Consumes exactly n(n-1)/2 uniforms from ``rng`` in linear edge order.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    m = num_edges(n)
    u = rng.random(m)
    g = GraphState(n)
    iu, iv = np.triu_indices(n, k=1)
    bits = (u < p).astype(np.uint8)
    g.adj[iu, iv] = bits
    g.adj[iv, iu] = bits
    g.deg = g.adj.sum(axis=1, dtype=np.int64)
    g.edge_count = int(g.deg.sum()) // 2
    return g
