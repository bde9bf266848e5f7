"""Compiled inner loops for the single-edge-update dynamics.

The kernels mirror the pure-Python engine step for step: each update
consumes two uniforms (edge choice, acceptance draw) in the same order,
so a chain advanced here is bit-identical to one advanced in Python from
the same generator state.  Supported pattern kinds are the edge,
two-star, triangle, and tetrahedron; specifications containing other
patterns fall back to the Python engine.
"""

from __future__ import annotations

import numpy as np
from numba import njit

KIND_EDGE = 0
KIND_TWO_STAR = 1
KIND_TRIANGLE = 2
KIND_TETRAHEDRON = 3


@njit(cache=True)
def _logistic(z):
    if z >= 0.0:
        return 1.0 / (1.0 + np.exp(-z))
    ez = np.exp(z)
    return ez / (1.0 + ez)


@njit(cache=True)
def _delta_h(adj, deg, a, b, kinds, scales, work):
    """Energy change for toggling edge {a, b}, independent of its state."""
    n = adj.shape[0]
    pres = adj[a, b]
    z = 0.0
    for i in range(kinds.size):
        kind = kinds[i]
        if kind == KIND_EDGE:
            d = 2.0
        elif kind == KIND_TWO_STAR:
            d = 2.0 * (deg[a] + deg[b] - 2 * pres) + 2.0
        elif kind == KIND_TRIANGLE:
            c = 0
            for t in range(n):
                c += adj[a, t] & adj[b, t]
            d = 6.0 * c
        else:
            c = 0
            for t in range(n):
                if adj[a, t] & adj[b, t]:
                    work[c] = t
                    c += 1
            pairs = 0
            for ii in range(c):
                wi = work[ii]
                for jj in range(ii + 1, c):
                    pairs += adj[wi, work[jj]]
            d = 24.0 * pairs
        z += scales[i] * d
    return z


@njit(cache=True)
def _apply(adj, deg, counts, a, b, newv):
    old = adj[a, b]
    if newv != old:
        adj[a, b] = newv
        adj[b, a] = newv
        if newv:
            deg[a] += 1
            deg[b] += 1
            counts[0] += 1
        else:
            deg[a] -= 1
            deg[b] -= 1
            counts[0] -= 1


@njit(cache=True)
def run_chunk(adj, deg, counts, kinds, scales, eu, ev, uniforms):
    """Advance one chain by len(uniforms)//2 updates in place."""
    m = eu.size
    n = adj.shape[0]
    work = np.empty(n, dtype=np.int64)
    steps = uniforms.size // 2
    for s in range(steps):
        k = int(uniforms[2 * s] * m)
        if k >= m:
            k = m - 1
        a = eu[k]
        b = ev[k]
        z = _delta_h(adj, deg, a, b, kinds, scales, work)
        p = _logistic(z)
        newv = np.uint8(1) if uniforms[2 * s + 1] < p else np.uint8(0)
        _apply(adj, deg, counts, a, b, newv)


@njit(cache=True)
def run_chunk_coupled(
    adjx, degx, countsx, adjy, degy, countsy, p_ref, kinds, scales, eu, ev, uniforms
):
    """Advance a model chain and a fixed-threshold reference chain together.

    Both chains see the same edge choice and the same acceptance draw;
    the reference chain sets the edge with constant probability p_ref,
    so its marginal law at every step stays the product measure it was
    started from.
    """
    m = eu.size
    n = adjx.shape[0]
    work = np.empty(n, dtype=np.int64)
    steps = uniforms.size // 2
    for s in range(steps):
        k = int(uniforms[2 * s] * m)
        if k >= m:
            k = m - 1
        a = eu[k]
        b = ev[k]
        u = uniforms[2 * s + 1]
        z = _delta_h(adjx, degx, a, b, kinds, scales, work)
        newx = np.uint8(1) if u < _logistic(z) else np.uint8(0)
        newy = np.uint8(1) if u < p_ref else np.uint8(0)
        _apply(adjx, degx, countsx, a, b, newx)
        _apply(adjy, degy, countsy, a, b, newy)


@njit(cache=True)
def run_chunk_monotone(
    adj_lo, deg_lo, counts_lo, adj_hi, deg_hi, counts_hi,
    kinds, scales, eu, ev, uniforms, state, full_check,
):
    """Advance an edgewise-ordered pair of chains under shared draws.

    state holds (steps done so far, first meeting step or -1, first
    ordering violation step or -1, current edgewise distance); steps are
    numbered from 1.  With full_check the whole adjacency pair is
    compared after every update, otherwise order is monitored only at
    the updated edge (sufficient by induction, since nothing else moves).
    """
    m = eu.size
    n = adj_lo.shape[0]
    work = np.empty(n, dtype=np.int64)
    steps = uniforms.size // 2
    for s in range(steps):
        k = int(uniforms[2 * s] * m)
        if k >= m:
            k = m - 1
        a = eu[k]
        b = ev[k]
        u = uniforms[2 * s + 1]
        z_lo = _delta_h(adj_lo, deg_lo, a, b, kinds, scales, work)
        z_hi = _delta_h(adj_hi, deg_hi, a, b, kinds, scales, work)
        new_lo = np.uint8(1) if u < _logistic(z_lo) else np.uint8(0)
        new_hi = np.uint8(1) if u < _logistic(z_hi) else np.uint8(0)
        before = 1 if adj_lo[a, b] != adj_hi[a, b] else 0
        _apply(adj_lo, deg_lo, counts_lo, a, b, new_lo)
        _apply(adj_hi, deg_hi, counts_hi, a, b, new_hi)
        after = 1 if new_lo != new_hi else 0
        state[3] += after - before
        t = state[0] + s + 1
        if state[3] == 0 and state[1] < 0:
            state[1] = t
        if state[2] < 0:
            if full_check:
                ok = True
                for i in range(n):
                    for j in range(i + 1, n):
                        if adj_lo[i, j] > adj_hi[i, j]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    state[2] = t
            elif new_lo > new_hi:
                state[2] = t
    state[0] += steps
