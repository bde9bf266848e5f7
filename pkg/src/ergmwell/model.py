"""The exponential random graph model specification.

A model is a list of pattern graphs with real coefficients; the first
pattern is always the single edge.  Coefficients for the higher patterns
must be nonnegative (the ferromagnetic regime), which is what makes the
monotone coupling order-preserving.  The log-weight of a graph x on n
vertices is the sum over patterns of beta_i * N_i(x) / n^(k_i - 2),
where N_i is the labeled count and k_i the pattern's vertex count.
"""

from __future__ import annotations

from dataclasses import dataclass

from ergmwell.patterns import Kind, SmallGraph, edge, hexagon, tetrahedron, triangle, two_star

_BUILDERS = {
    Kind.EDGE: edge,
    Kind.TWO_STAR: two_star,
    Kind.TRIANGLE: triangle,
    Kind.TETRAHEDRON: tetrahedron,
    Kind.HEXAGON: hexagon,
}


@dataclass(frozen=True)
class ErgmSpec:
    """Pattern graphs G_0..G_K with coefficients beta_0..beta_K."""

    graphs: tuple[SmallGraph, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        if len(self.graphs) != len(self.betas) or not self.graphs:
            raise ValueError("graphs and betas must be nonempty lists of equal length")
        if self.graphs[0].kind is not Kind.EDGE:
            raise ValueError("the first pattern must be the single edge")
        for i, b in enumerate(self.betas):
            if i >= 1 and b < 0:
                raise ValueError(
                    f"beta_{i} = {b} < 0: only the edge coefficient may be negative"
                )

    @classmethod
    def from_kinds(cls, kinds, betas) -> "ErgmSpec":
        """Build from kind names or Kind values, e.g. ('edge', 'twostar', 'triangle')."""
        graphs = []
        for k in kinds:
            kind = Kind(k) if not isinstance(k, Kind) else k
            if kind not in _BUILDERS:
                raise ValueError(f"kind {k!r} needs an explicit SmallGraph")
            graphs.append(_BUILDERS[kind]())
        return cls(tuple(graphs), tuple(float(b) for b in betas))

    @property
    def edge_counts(self) -> tuple[int, ...]:
        return tuple(g.n_edges for g in self.graphs)

    @property
    def vertex_counts(self) -> tuple[int, ...]:
        return tuple(g.n_vertices for g in self.graphs)

    def describe(self) -> str:
        parts = [
            f"{g.kind.value}({g.n_edges}e):{b:g}" for g, b in zip(self.graphs, self.betas)
        ]
        return " + ".join(parts)


def two_well_triangle_spec() -> ErgmSpec:
    """Edge + two-star + triangle model with two metastable wells."""
    return ErgmSpec.from_kinds(["edge", "twostar", "triangle"], [-1.0, 0.55, 0.5])


def two_well_tetrahedron_spec() -> ErgmSpec:
    """Edge + two-star + tetrahedron model with two metastable wells."""
    return ErgmSpec.from_kinds(["edge", "twostar", "tetrahedron"], [-0.6, 0.25, 0.5])


def two_well_hexagon_spec() -> ErgmSpec:
    """Edge + two-star + hexagon model; same landscape as the tetrahedron model."""
    return ErgmSpec.from_kinds(["edge", "twostar", "hexagon"], [-0.6, 0.25, 0.5])
