"""Small pattern graphs and their labeled counts in a host graph.

The count N(G, x) is the number of vertex maps from the pattern G into
the host x that send every pattern edge to a host edge.  Maps need not
be injective, but a pattern edge whose endpoints collapse to one host
vertex always fails because the host has no loops.  Change counts
N(G, x, e) measure how the count moves when a single host edge e is
toggled; they drive the Glauber dynamics, so each specification kind
also has a closed-form fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product

import numpy as np

from ergmwell.graphs import GraphState


class Kind(Enum):
    EDGE = "edge"
    TWO_STAR = "twostar"
    TRIANGLE = "triangle"
    TETRAHEDRON = "tetrahedron"
    HEXAGON = "hexagon"
    GENERIC = "generic"


_CANONICAL = {
    Kind.EDGE: (2, ((0, 1),)),
    Kind.TWO_STAR: (3, ((0, 1), (1, 2))),
    Kind.TRIANGLE: (3, ((0, 1), (0, 2), (1, 2))),
    Kind.TETRAHEDRON: (4, tuple(combinations(range(4), 2))),
    Kind.HEXAGON: (6, tuple((i, (i + 1) % 6) for i in range(6))),
}

# Pattern-vertex budget for the counting routines; generic patterns used
# only for the scalar landscape may be larger (up to MAX_VERTICES).
MAX_COUNT_VERTICES = 8
MAX_VERTICES = 12


@dataclass(frozen=True)
class SmallGraph:
    """A simple pattern graph on vertices {0, ..., k-1}."""

    kind: Kind
    k: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not 1 <= self.k <= MAX_VERTICES:
            raise ValueError(f"pattern vertex count {self.k} outside [1, {MAX_VERTICES}]")
        seen = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError("pattern has a loop")
            if not (0 <= u < self.k and 0 <= v < self.k):
                raise ValueError("pattern edge endpoint out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError("pattern has a duplicate edge")
            seen.add(key)
        if not self.edges:
            raise ValueError("pattern must have at least one edge")
        if self.kind in _CANONICAL:
            k, canon = _CANONICAL[self.kind]
            mine = {(min(u, v), max(u, v)) for u, v in self.edges}
            ref = {(min(u, v), max(u, v)) for u, v in canon}
            if self.k != k or mine != ref:
                raise ValueError(f"edge list does not match canonical {self.kind.value}")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_vertices(self) -> int:
        return self.k


def edge() -> SmallGraph:
    return SmallGraph(Kind.EDGE, *_CANONICAL[Kind.EDGE])


def two_star() -> SmallGraph:
    return SmallGraph(Kind.TWO_STAR, *_CANONICAL[Kind.TWO_STAR])


def triangle() -> SmallGraph:
    return SmallGraph(Kind.TRIANGLE, *_CANONICAL[Kind.TRIANGLE])


def tetrahedron() -> SmallGraph:
    return SmallGraph(Kind.TETRAHEDRON, *_CANONICAL[Kind.TETRAHEDRON])


def hexagon() -> SmallGraph:
    return SmallGraph(Kind.HEXAGON, *_CANONICAL[Kind.HEXAGON])


def generic(k: int, edges) -> SmallGraph:
    return SmallGraph(Kind.GENERIC, k, tuple((min(u, v), max(u, v)) for u, v in edges))


def _components(g: SmallGraph) -> list[list[int]]:
    """Connected components of the pattern, as vertex lists."""
    nbr = {v: set() for v in range(g.k)}
    for u, v in g.edges:
        nbr[u].add(v)
        nbr[v].add(u)
    seen, comps = set(), []
    for root in range(g.k):
        if root in seen:
            continue
        stack, comp = [root], []
        seen.add(root)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in nbr[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def _search_order(g: SmallGraph, comp: list[int]) -> tuple[list[int], list[list[int]]]:
    """BFS order of one component plus, per vertex, its already-placed neighbors."""
    nbr = {v: set() for v in comp}
    for u, v in g.edges:
        if u in nbr and v in nbr:
            nbr[u].add(v)
            nbr[v].add(u)
    order = [comp[0]]
    placed = {comp[0]}
    while len(order) < len(comp):
        # pick the unplaced vertex with the most placed neighbors (pruning)
        best = max(
            (v for v in comp if v not in placed),
            key=lambda v: len(nbr[v] & placed),
        )
        order.append(best)
        placed.add(best)
    back = [[u for u in nbr[v] if u in order[: i]] for i, v in enumerate(order)]
    return order, back


def _hom_component(adj: np.ndarray, order: list[int], back: list[list[int]]) -> int:
    """Count edge-preserving maps of one connected component into adj."""
    n = adj.shape[0]
    k = len(order)
    pos = {v: i for i, v in enumerate(order)}
    image = [0] * k
    ones = np.ones(n, dtype=np.uint8)

    def candidates(level: int) -> np.ndarray:
        cand = ones
        for u in back[level]:
            cand = cand & adj[image[pos[u]]]
        return cand

    def rec(level: int) -> int:
        cand = candidates(level)
        if level == k - 1:
            return int(cand.sum())
        total = 0
        for w in np.nonzero(cand)[0]:
            image[level] = w
            total += rec(level + 1)
        return total

    if k == 1:
        return n
    return rec(0)


def hom_count(g: SmallGraph, x: GraphState) -> int:
    """Number of edge-preserving vertex maps of the pattern into x."""
    if g.k > MAX_COUNT_VERTICES:
        raise ValueError(f"counting supports patterns on <= {MAX_COUNT_VERTICES} vertices")
    total = 1
    for comp in _components(g):
        order, back = _search_order(g, comp)
        total *= _hom_component(x.adj, order, back)
        if total == 0:
            return 0
    return total


def _delta_component_through(adj_plus, order, back, pos, pattern_edges, a, b) -> int:
    """Maps of one component into adj_plus that put some pattern edge onto {a, b}.

    Enumerates maps level by level; a map counts once it has covered the
    host edge {a, b} with at least one pattern edge.
    """
    n = adj_plus.shape[0]
    k = len(order)
    image = [0] * k
    ones = np.ones(n, dtype=np.uint8)
    target = {a, b}

    def candidates(level: int) -> np.ndarray:
        cand = ones
        for u in back[level]:
            cand = cand & adj_plus[image[pos[u]]]
        return cand

    def covers(level: int, w: int) -> bool:
        # does placing order[level] at w map some back-edge onto {a, b}?
        if w not in target:
            return False
        other = b if w == a else a
        return any(image[pos[u]] == other for u in back[level])

    def rec(level: int, flag: bool) -> int:
        cand = candidates(level)
        if level == k - 1:
            if flag:
                return int(cand.sum())
            total = 0
            for w in (a, b):
                if cand[w] and covers(level, w):
                    total += 1
            return total
        total = 0
        if flag:
            for w in np.nonzero(cand)[0]:
                image[level] = w
                total += rec(level + 1, True)
        else:
            for w in np.nonzero(cand)[0]:
                image[level] = w
                total += rec(level + 1, covers(level, int(w)))
        return total

    if k == 1:
        return 0
    return rec(0, False)


def delta_count(g: SmallGraph, x: GraphState, e: tuple[int, int]) -> int:
    """Change count: maps into x with edge e forced present that cover e.

    Equals hom_count(g, x with e on) - hom_count(g, x with e off) and does
    not depend on the current value of x at e.
    """
    if g.k > MAX_COUNT_VERTICES:
        raise ValueError(f"counting supports patterns on <= {MAX_COUNT_VERTICES} vertices")
    a, b = e
    x._check(a, b)
    had = bool(x.adj[a, b])
    x.set_edge(a, b, True)
    try:
        comps = _components(g)
        if len(comps) == 1:
            order, back = _search_order(g, comps[0])
            pos = {v: i for i, v in enumerate(order)}
            return _delta_component_through(x.adj, order, back, pos, g.edges, a, b)
        # Disconnected pattern: inclusion-exclusion via component products
        # (through-maps must cover e in at least one component).
        plus = [None] * len(comps)
        minus = [None] * len(comps)
        for i, comp in enumerate(comps):
            order, back = _search_order(g, comp)
            plus[i] = _hom_component(x.adj, order, back)
        x.set_edge(a, b, False)
        for i, comp in enumerate(comps):
            order, back = _search_order(g, comp)
            minus[i] = _hom_component(x.adj, order, back)
        x.set_edge(a, b, True)
        total_plus = int(np.prod(plus, dtype=object))
        total_minus = int(np.prod(minus, dtype=object))
        return total_plus - total_minus
    finally:
        x.set_edge(a, b, had)


# --- fast closed-form deltas -------------------------------------------------

# Placement table for the six-cycle walk expansion: for each nonempty
# subset of the six cyclic slots holding the rank-two edge update, the
# run lengths of base-matrix factors between consecutive occurrences.
def _cycle_gap_table() -> list[tuple[int, ...]]:
    table = []
    for mask in range(1, 64):
        pos = [i for i in range(6) if (mask >> i) & 1]
        k = len(pos)
        gaps = tuple(
            (pos[(i + 1) % k] - pos[i] - 1) % 6 if k > 1 else 5
            for i in range(k)
        )
        table.append(gaps)
    return table


_HEX_GAPS = _cycle_gap_table()


def _hexagon_delta(adj: np.ndarray, a: int, b: int) -> int:
    """Closed 6-walks gained by adding edge {a, b} to the graph without it.

    The count of six-cycle maps equals the number of rooted closed
    6-walks, i.e. the trace of the sixth power of the adjacency matrix.
    Writing the updated matrix as base plus a rank-two perturbation at
    {a, b}, the trace difference expands over placements of the
    perturbation; every term is a product of walk counts of length <= 5
    between a and b in the base graph, so only ten mat-vec products are
    needed: O(n^2) per call.
    """
    n = adj.shape[0]
    base = adj.astype(np.int64)
    base[a, b] = 0
    base[b, a] = 0
    # P[m, s, t] = number of m-step walks from {a,b}[s] to {a,b}[t] in base
    P = np.zeros((6, 2, 2), dtype=np.int64)
    P[0, 0, 0] = P[0, 1, 1] = 1
    wa = np.zeros(n, dtype=np.int64)
    wb = np.zeros(n, dtype=np.int64)
    wa[a] = 1
    wb[b] = 1
    for m in range(1, 6):
        wa = base @ wa
        wb = base @ wb
        P[m, 0, 0] = wa[a]
        P[m, 0, 1] = wa[b]
        P[m, 1, 0] = wb[a]
        P[m, 1, 1] = wb[b]
    total = 0
    for gaps in _HEX_GAPS:
        k = len(gaps)
        # each occurrence routes the walk a->b (dir 0) or b->a (dir 1)
        for dirs in product((0, 1), repeat=k):
            term = 1
            for i in range(k):
                t_i = 1 - dirs[i]  # landing endpoint of occurrence i
                s_next = dirs[(i + 1) % k]  # starting endpoint of next
                term *= P[gaps[i], t_i, s_next]
                if term == 0:
                    break
            total += term
    return total


def fast_delta(kind: Kind, x: GraphState, e: tuple[int, int]) -> int:
    """Closed-form change count for the specification kinds.

    Matches delta_count for the same pattern; degrees and neighborhoods
    are read with the edge e itself excluded, so the result is
    independent of the current value of x at e.
    """
    a, b = e
    x._check(a, b)
    present = int(x.adj[a, b])
    if kind is Kind.EDGE:
        return 2
    if kind is Kind.TWO_STAR:
        da = int(x.deg[a]) - present
        db = int(x.deg[b]) - present
        return 2 * (da + db) + 2
    if kind is Kind.TRIANGLE:
        return 6 * x.common_neighbors(a, b)
    if kind is Kind.TETRAHEDRON:
        mask = (x.adj[a] & x.adj[b]).astype(bool)
        sub = x.adj[np.ix_(mask, mask)]
        return 24 * (int(sub.sum()) // 2)
    if kind is Kind.HEXAGON:
        return int(_hexagon_delta(x.adj, a, b))
    raise ValueError(f"no fast delta for kind {kind!r}; use delta_count")


def pattern_delta(g: SmallGraph, x: GraphState, e: tuple[int, int]) -> int:
    """Fast path for tagged kinds, exact enumeration for generic patterns."""
    if g.kind is Kind.GENERIC:
        return delta_count(g, x, e)
    return fast_delta(g.kind, x, e)
