"""Single-edge-update dynamics for the model, with coupled variants.

Each update picks a uniform potential edge and sets it to present with
probability logistic(energy change).  One update consumes exactly two
uniforms from the chain's generator, first the edge choice and then the
acceptance draw, a convention shared by the Python stepper and the
compiled kernels so trajectories agree bit for bit across engines.

Coupled modes share both draws between two chains: against a constant
threshold this realizes the per-step-optimal coupling to the product
measure, and between two ordered chains of the same ferromagnetic model
it preserves the edgewise order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ergmwell import _kernels
from ergmwell.graphs import GraphState, edge_endpoints, num_edges, sample_er
from ergmwell.landscape import logistic
from ergmwell.model import ErgmSpec
from ergmwell.patterns import Kind, pattern_delta

_CHUNK_STEPS = 1 << 16

_KERNEL_CODES = {
    Kind.EDGE: _kernels.KIND_EDGE,
    Kind.TWO_STAR: _kernels.KIND_TWO_STAR,
    Kind.TRIANGLE: _kernels.KIND_TRIANGLE,
    Kind.TETRAHEDRON: _kernels.KIND_TETRAHEDRON,
}


def as_generator(seed_or_rng) -> np.random.Generator:
    """Pass through a Generator, or build one from an integer seed."""
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)


def delta_hamiltonian(spec: ErgmSpec, x: GraphState, e: tuple[int, int]) -> float:
    """Log-weight change for toggling edge e, independent of its state."""
    n = x.n
    z = 0.0
    for g, b in zip(spec.graphs, spec.betas):
        z += b * pattern_delta(g, x, e) / float(n) ** (g.n_vertices - 2)
    return z


def update_probability(spec: ErgmSpec, x: GraphState, e: tuple[int, int]) -> float:
    """Probability that a resampled edge e comes out present."""
    return logistic(delta_hamiltonian(spec, x, e))


def kernel_supported(spec: ErgmSpec) -> bool:
    """Whether every pattern in the spec has a compiled delta."""
    return all(g.kind in _KERNEL_CODES for g in spec.graphs)


def _kernel_arrays(spec: ErgmSpec, n: int):
    kinds = np.array([_KERNEL_CODES[g.kind] for g in spec.graphs], dtype=np.int64)
    scales = np.array(
        [b / float(n) ** (g.n_vertices - 2) for g, b in zip(spec.graphs, spec.betas)],
        dtype=np.float64,
    )
    return kinds, scales


@dataclass
class StepRecord:
    e: tuple[int, int]
    proposed_value: bool
    accepted_change: bool


@dataclass
class ChainState:
    """One chain: mutable graph, immutable spec, dedicated generator."""

    x: GraphState
    spec: ErgmSpec
    rng: np.random.Generator
    steps_taken: int = 0
    _eu: np.ndarray = field(default=None, repr=False)
    _ev: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self._eu is None:
            self._eu, self._ev = edge_endpoints(self.x.n)


def make_chain(spec: ErgmSpec, n: int, p_start: float, rng) -> ChainState:
    """Chain warm-started from the product measure at density p_start."""
    rng = as_generator(rng)
    return ChainState(x=sample_er(n, p_start, rng), spec=spec, rng=rng)


def step(chain: ChainState) -> StepRecord:
    """One update: uniform edge, then acceptance draw."""
    m = num_edges(chain.x.n)
    k = int(chain.rng.random() * m)
    if k >= m:
        k = m - 1
    a = int(chain._eu[k])
    b = int(chain._ev[k])
    p = update_probability(chain.spec, chain.x, (a, b))
    proposed = bool(chain.rng.random() < p)
    changed = chain.x.has_edge(a, b) != proposed
    chain.x.set_edge(a, b, proposed)
    chain.steps_taken += 1
    return StepRecord(e=(a, b), proposed_value=proposed, accepted_change=changed)


def advance(chain: ChainState, T: int, engine: str = "auto") -> None:
    """Run T updates on an existing chain, preferring the compiled path."""
    use_kernel = engine != "python" and kernel_supported(chain.spec)
    if engine == "numba" and not use_kernel:
        raise ValueError("spec contains patterns without a compiled delta")
    if not use_kernel:
        for _ in range(T):
            step(chain)
        return
    kinds, scales = _kernel_arrays(chain.spec, chain.x.n)
    counts = np.array([chain.x.edge_count], dtype=np.int64)
    done = 0
    while done < T:
        c = min(_CHUNK_STEPS, T - done)
        u = chain.rng.random(2 * c)
        _kernels.run_chunk(
            chain.x.adj, chain.x.deg, counts, kinds, scales, chain._eu, chain._ev, u
        )
        done += c
    chain.x.edge_count = int(counts[0])
    chain.steps_taken += T


def run_chain(
    spec: ErgmSpec,
    p_start: float,
    n: int,
    T: Optional[int] = None,
    rng=None,
    engine: str = "auto",
) -> GraphState:
    """Warm-start at density p_start and run T updates (default n^3)."""
    if T is None:
        T = n**3
    if T < 0:
        raise ValueError("step count must be nonnegative")
    chain = make_chain(spec, n, p_start, as_generator(rng))
    _advance(chain, T, engine)
    return chain.x


@dataclass
class CoupledPair:
    """Two chains driven by one generator and shared per-step draws."""

    a: ChainState
    b: ChainState
    mode: str  # "monotone" or "erdos_renyi"
    p_ref: Optional[float] = None
    steps_taken: int = 0

    def __post_init__(self):
        if self.mode not in ("monotone", "erdos_renyi"):
            raise ValueError(f"unknown coupling mode {self.mode!r}")
        if self.mode == "erdos_renyi" and self.p_ref is None:
            raise ValueError("erdos_renyi mode needs a reference density")
        if self.a.x.n != self.b.x.n:
            raise ValueError("coupled chains need equal vertex counts")


def step_pair(pair: CoupledPair) -> tuple[int, int]:
    """One shared update; returns the resampled edge."""
    chain = pair.a
    m = num_edges(chain.x.n)
    k = int(chain.rng.random() * m)
    if k >= m:
        k = m - 1
    a = int(chain._eu[k])
    b = int(chain._ev[k])
    u = chain.rng.random()
    pa = update_probability(chain.spec, chain.x, (a, b))
    chain.x.set_edge(a, b, u < pa)
    if pair.mode == "erdos_renyi":
        pb = pair.p_ref
    else:
        pb = update_probability(pair.b.spec, pair.b.x, (a, b))
    pair.b.x.set_edge(a, b, u < pb)
    pair.a.steps_taken += 1
    pair.b.steps_taken += 1
    pair.steps_taken += 1
    return (a, b)


def run_coupled_er(
    spec: ErgmSpec,
    p_star: float,
    n: int,
    T: Optional[int] = None,
    rng=None,
    engine: str = "auto",
) -> tuple[GraphState, GraphState]:
    """Model chain and product-measure chain from one shared start.

    Both chains start from the same draw of the product measure at
    density p_star, so the reference chain is exactly stationary at
    every step, including edges never resampled.  Each step shares the
    edge choice and the acceptance draw, which couples the two edge
    updates optimally.
    """
    if not 0.0 < p_star < 1.0:
        raise ValueError(f"reference density {p_star} outside (0, 1)")
    if T is None:
        T = n**3
    rng = as_generator(rng)
    z = sample_er(n, p_star, rng)
    x, y = z, z.copy()
    use_kernel = engine != "python" and kernel_supported(spec)
    if engine == "numba" and not use_kernel:
        raise ValueError("spec contains patterns without a compiled delta")
    if use_kernel:
        eu, ev = edge_endpoints(n)
        kinds, scales = _kernel_arrays(spec, n)
        cx = np.array([x.edge_count], dtype=np.int64)
        cy = np.array([y.edge_count], dtype=np.int64)
        done = 0
        while done < T:
            c = min(_CHUNK_STEPS, T - done)
            u = rng.random(2 * c)
            _kernels.run_chunk_coupled(
                x.adj, x.deg, cx, y.adj, y.deg, cy, p_star, kinds, scales, eu, ev, u
            )
            done += c
        x.edge_count = int(cx[0])
        y.edge_count = int(cy[0])
    else:
        pair = CoupledPair(
            a=ChainState(x=x, spec=spec, rng=rng),
            b=ChainState(x=y, spec=spec, rng=rng),
            mode="erdos_renyi",
            p_ref=p_star,
        )
        for _ in range(T):
            step_pair(pair)
    return x, y


def run_monotone_pair(
    spec: ErgmSpec,
    x_lo: GraphState,
    x_hi: GraphState,
    T: int,
    rng=None,
    engine: str = "auto",
    full_check: bool = False,
) -> tuple[GraphState, GraphState, Optional[int]]:
    """Shared-draw evolution of an edgewise-ordered pair of chains.

    Requires x_lo <= x_hi edgewise; the ferromagnetic spec keeps the
    order at every step, which the kernel verifies (exhaustively when
    full_check is set, else at the updated edge).  Returns the two final
    states and the first step at which they became equal, if any; once
    equal they stay equal since all draws are shared.
    """
    if x_lo.n != x_hi.n:
        raise ValueError("chains need equal vertex counts")
    if not np.all(x_lo.adj <= x_hi.adj):
        raise ValueError("starting states are not edgewise ordered")
    rng = as_generator(rng)
    lo, hi = x_lo.copy(), x_hi.copy()
    use_kernel = engine != "python" and kernel_supported(spec)
    if engine == "numba" and not use_kernel:
        raise ValueError("spec contains patterns without a compiled delta")
    n = lo.n
    if use_kernel:
        eu, ev = edge_endpoints(n)
        kinds, scales = _kernel_arrays(spec, n)
        c_lo = np.array([lo.edge_count], dtype=np.int64)
        c_hi = np.array([hi.edge_count], dtype=np.int64)
        dist = lo.hamming_to(hi)
        state = np.array([0, 0 if dist == 0 else -1, -1, dist], dtype=np.int64)
        done = 0
        while done < T:
            c = min(_CHUNK_STEPS, T - done)
            u = rng.random(2 * c)
            _kernels.run_chunk_monotone(
                lo.adj, lo.deg, c_lo, hi.adj, hi.deg, c_hi,
                kinds, scales, eu, ev, u, state, full_check,
            )
            done += c
        lo.edge_count = int(c_lo[0])
        hi.edge_count = int(c_hi[0])
        if state[2] >= 0:
            raise RuntimeError(f"edgewise order broken at step {int(state[2])}")
        first_meet = int(state[1]) if state[1] >= 0 else None
    else:
        pair = CoupledPair(
            a=ChainState(x=lo, spec=spec, rng=rng),
            b=ChainState(x=hi, spec=spec, rng=rng),
            mode="monotone",
        )
        first_meet = 0 if lo == hi else None
        for t in range(1, T + 1):
            step_pair(pair)
            if np.any(lo.adj > hi.adj):
                raise RuntimeError(f"edgewise order broken at step {t}")
            if first_meet is None and lo == hi:
                first_meet = t
    return lo, hi, first_meet


def gamma_radius(spec: ErgmSpec, x: GraphState, p: float) -> float:
    """Worst deviation of any local pattern density from p.

    For each spec pattern with at least two edges and each potential
    edge, the change count is normalized to a density r in [0, 1]; the
    result is the max of |r - p|.  A graph belongs to the well of radius
    eps around p exactly when this value is at most eps.
    """
    qualifying = [g for g in spec.graphs if g.n_edges >= 2]
    if not qualifying:
        raise ValueError("no spec pattern with >= 2 edges to measure")
    n = x.n
    radius = 0.0
    for g in qualifying:
        denom = 2.0 * g.n_edges * float(n) ** (g.n_vertices - 2)
        expo = 1.0 / (g.n_edges - 1)
        for u in range(n):
            for v in range(u + 1, n):
                r = (pattern_delta(g, x, (u, v)) / denom) ** expo
                radius = max(radius, abs(r - p))
    return radius
