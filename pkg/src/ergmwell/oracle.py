"""Exact enumeration of the Gibbs measure at tiny sizes.

Ground truth for everything else: states are enumerated in linear
edge-bit order (state index s has edge k present iff bit k of s is set),
log-weights are recomputed from the enumerated pattern counts rather
than from any incremental delta, and the one-step transition kernel is
assembled from the engine's update probabilities so that reversibility
can be checked against the enumerated weights.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ergmwell.graphs import GraphState, edge_pair, num_edges
from ergmwell.model import ErgmSpec
from ergmwell.patterns import hom_count

MAX_EXACT_N = 6
MAX_KERNEL_N = 5


@dataclass(frozen=True)
class ExactModel:
    n: int
    spec: ErgmSpec
    log_weights: np.ndarray  # H(x) per state, enumeration order
    probabilities: np.ndarray


def _state_graph(bits: int, n: int) -> GraphState:
    return GraphState.from_bits(bits, n)


def exact_distribution(spec: ErgmSpec, n: int) -> ExactModel:
    """Full normalized table of the Gibbs measure on n vertices."""
    if n > MAX_EXACT_N:
        raise ValueError(f"exact enumeration supports n <= {MAX_EXACT_N}")
    m = num_edges(n)
    states = 1 << m
    logw = np.empty(states, dtype=np.float64)
    for s in range(states):
        g = _state_graph(s, n)
        h = 0.0
        for pat, b in zip(spec.graphs, spec.betas):
            h += b * hom_count(pat, g) / float(n) ** (pat.n_vertices - 2)
        logw[s] = h
    shifted = np.exp(logw - logw.max())
    probs = shifted / shifted.sum()
    return ExactModel(n=n, spec=spec, log_weights=logw, probabilities=probs)


def exact_edge_marginal(model: ExactModel, e: tuple[int, int]) -> float:
    """Probability that the edge e is present."""
    from ergmwell.graphs import edge_index

    k = edge_index(e[0], e[1], model.n)
    idx = np.arange(model.probabilities.size)
    has = ((idx >> k) & 1).astype(bool)
    return float(model.probabilities[has].sum())


def exact_pair_covariance(
    model: ExactModel, e: tuple[int, int], e2: tuple[int, int]
) -> float:
    """Covariance of two edge indicators under the exact measure."""
    from ergmwell.graphs import edge_index

    k1 = edge_index(e[0], e[1], model.n)
    k2 = edge_index(e2[0], e2[1], model.n)
    if k1 == k2:
        raise ValueError("edges must be distinct")
    idx = np.arange(model.probabilities.size)
    a = ((idx >> k1) & 1).astype(np.float64)
    b = ((idx >> k2) & 1).astype(np.float64)
    p = model.probabilities
    return float((a * b * p).sum() - (a * p).sum() * (b * p).sum())


def exact_expectation(model: ExactModel, f) -> float:
    """Expectation of an arbitrary graph observable under the exact measure."""
    total = 0.0
    for s, p in enumerate(model.probabilities):
        total += p * f(_state_graph(s, model.n))
    return float(total)


def transition_kernel(spec: ErgmSpec, n: int) -> tuple[np.ndarray, ExactModel]:
    """One-step kernel of the dynamics over all states (n <= 5).

    Row x: pick each of the m edges with probability 1/m, then land on
    the state with that edge present with the engine's update
    probability.
    """
    from ergmwell.glauber import update_probability

    if n > MAX_KERNEL_N:
        raise ValueError(f"kernel enumeration supports n <= {MAX_KERNEL_N}")
    model = exact_distribution(spec, n)
    m = num_edges(n)
    states = 1 << m
    P = np.zeros((states, states), dtype=np.float64)
    for s in range(states):
        g = _state_graph(s, n)
        for k in range(m):
            e = edge_pair(k, n)
            q = update_probability(spec, g, e)
            up = s | (1 << k)
            down = s & ~(1 << k)
            P[s, up] += q / m
            P[s, down] += (1.0 - q) / m
    return P, model


def verify_detailed_balance(spec: ErgmSpec, n: int) -> float:
    """Max relative reversibility residual over adjacent state pairs."""
    P, model = transition_kernel(spec, n)
    probs = model.probabilities
    m = num_edges(n)
    worst = 0.0
    for s in range(probs.size):
        for k in range(m):
            t = s ^ (1 << k)
            if t < s:
                continue
            fwd = probs[s] * P[s, t]
            bwd = probs[t] * P[t, s]
            scale = max(fwd, bwd, 1e-300)
            worst = max(worst, abs(fwd - bwd) / scale)
    return worst
