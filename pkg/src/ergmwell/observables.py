"""Observables measured on samples and on coupled sample pairs.

All of these move by a bounded amount when one edge flips, which is the
property that drives their concentration around the well density.  The
coupling statistics compare a model sample X with a reference sample Y
through the signed difference X - Y over potential edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ergmwell.graphs import GraphState, InvalidEdgeError


def _check_vertex(x: GraphState, v: int) -> None:
    if not 0 <= v < x.n:
        raise InvalidEdgeError(f"vertex {v} out of range for n={x.n}")


def edge_counts(x: GraphState, v: int | None = None) -> int:
    """Total edge count, or the degree of v when a vertex is given."""
    if v is None:
        return x.edge_count
    _check_vertex(x, v)
    return int(x.deg[v])


def triangle_counts(x: GraphState, v: int | None = None) -> int:
    """Unlabeled triangle count, total or through the vertex v."""
    if v is None:
        a = x.adj.astype(np.int64)
        return int(np.trace(a @ a @ a)) // 6
    _check_vertex(x, v)
    nb = x.adj[v].astype(bool)
    return int(x.adj[np.ix_(nb, nb)].sum()) // 2


@dataclass(frozen=True)
class SignedDifference:
    """Sparse view of X - Y over potential edges, with aggregates."""

    n: int
    entries: dict  # (u, v) with u < v -> -1 or +1, omitting zeros
    hamming: int
    signed_discrepancy: int
    difference_graph: GraphState


def signed_difference(x: GraphState, y: GraphState) -> SignedDifference:
    """Edgewise difference of two graphs on the same vertex set."""
    if x.n != y.n:
        raise InvalidEdgeError("signed difference needs equal vertex counts")
    diff = x.adj.astype(np.int8) - y.adj.astype(np.int8)
    iu, iv = np.triu_indices(x.n, k=1)
    vals = diff[iu, iv]
    nz = vals != 0
    entries = {
        (int(u), int(v)): int(s) for u, v, s in zip(iu[nz], iv[nz], vals[nz])
    }
    return SignedDifference(
        n=x.n,
        entries=entries,
        hamming=int(np.abs(vals).sum()),
        signed_discrepancy=int(vals.sum()),
        difference_graph=GraphState.from_adjacency(np.abs(diff)),
    )


def average_clustering(g: GraphState) -> float:
    """Mean over all vertices of the fraction of closed wedges.

    A vertex of degree below two has no wedge and contributes zero while
    remaining in the denominator, so near-empty graphs score zero rather
    than being undefined.
    """
    total = 0.0
    for v in range(g.n):
        d = int(g.deg[v])
        if d < 2:
            continue
        nb = g.adj[v].astype(bool)
        links = int(g.adj[np.ix_(nb, nb)].sum()) // 2
        total += links / (d * (d - 1) / 2)
    return total / g.n
