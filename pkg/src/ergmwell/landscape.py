"""The scalar variational function behind the model's phase structure.

For edge density p in [0, 1] the function is

    L(p) = sum_i beta_i * p^(m_i) - I(p),      I(p) = (p log p + (1-p) log(1-p)) / 2,

where m_i is the edge count of pattern i.  Its local maximizers with
negative curvature are the densities of the metastable wells; the number
of such maximizers separates the subcritical, supercritical, and
critical parameter regimes.  Equivalently, those densities are the
attracting fixed points of p -> logistic(field(p)) where field(p) is
twice the derivative of the energy part; both views are exposed here and
their equivalence is part of the test contract.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

# Root search parameters: uniform scan of the interior, then bisection.
GRID_POINTS = 10_000
GRID_MARGIN = 1e-6
ROOT_TOL = 1e-12
DEGENERATE_L2_TOL = 1e-6
DEGENERATE_L1_TOL = 1e-6
VALUE_REL_TOL = 1e-9


class DomainError(ValueError):
    """Argument outside the function's domain."""


def entropy_term(p: float) -> float:
    """I(p) = (p log p + (1-p) log(1-p)) / 2, with I(0) = I(1) = 0."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p = {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return 0.5 * (p * math.log(p) + (1.0 - p) * math.log(1.0 - p))


def landscape_eval(spec, p: float) -> tuple[float, float, float]:
    """Value and first two derivatives of L at interior p.

    The entropy derivatives diverge at the endpoints, so p must lie in
    the open interval (0, 1).
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"derivatives of L need p in (0, 1), got {p}")
    L = -entropy_term(p)
    L1 = -0.5 * math.log(p / (1.0 - p))
    L2 = -1.0 / (2.0 * p * (1.0 - p))
    for b, m in zip(spec.betas, spec.edge_counts):
        L += b * p**m
        L1 += b * m * p ** (m - 1)
        if m >= 2:
            L2 += b * m * (m - 1) * p ** (m - 2)
    return L, L1, L2


def logistic(z: float) -> float:
    """exp(z) / (1 + exp(z)), overflow-safe on both tails."""
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    ez = math.exp(z)
    return ez / (1.0 + ez)


def local_field(spec, p: float) -> float:
    """sum_i 2 beta_i m_i p^(m_i - 1): the drive seen by one edge at density p."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p = {p} outside [0, 1]")
    return sum(2.0 * b * m * p ** (m - 1) for b, m in zip(spec.betas, spec.edge_counts))


def psi_phi(spec, p: float) -> tuple[float, float]:
    """The local field at density p and its logistic image.

    The second component is the self-consistent edge update probability;
    its fixed points coincide with the critical points of L.
    """
    z = local_field(spec, p)
    return z, logistic(z)


class PointKind(Enum):
    LOCAL_MAX = "max"
    LOCAL_MIN = "min"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class StationaryPoint:
    p: float
    L: float
    L2: float
    kind: PointKind


class Regime(Enum):
    SUBCRITICAL = "subcritical"
    SUPERCRITICAL = "supercritical"
    CRITICAL = "critical"


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    stationary_points: tuple[StationaryPoint, ...]
    m_beta: tuple[StationaryPoint, ...] = field(default=())
    u_beta: tuple[StationaryPoint, ...] = field(default=())

    def local_maxima(self) -> tuple[StationaryPoint, ...]:
        return tuple(s for s in self.stationary_points if s.kind is PointKind.LOCAL_MAX)


def _bisect(f, lo: float, hi: float, tol: float) -> float:
    """Root of f on a sign-change bracket, to |f| <= tol or bracket collapse."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if abs(fmid) <= tol:
            return mid
        if (fmid > 0.0) == (flo > 0.0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_stationary_points(
    spec,
    grid_points: int = GRID_POINTS,
    tol: float = ROOT_TOL,
) -> list[StationaryPoint]:
    """All interior stationary points of L, sorted by p.

    Simple roots of L' appear as sign changes on a uniform grid over
    [margin, 1 - margin] and are refined by bisection.  Tangential
    (double) roots carry no sign change in L', so they are additionally
    hunted at the sign changes of L'': wherever the curvature crosses
    zero with |L'| small, a degenerate stationary point is recorded.
    """
    if grid_points < 1000:
        raise ValueError("grid must have at least 1000 points")

    def L1(p):
        return landscape_eval(spec, p)[1]

    def L2(p):
        return landscape_eval(spec, p)[2]

    lo, hi = GRID_MARGIN, 1.0 - GRID_MARGIN
    step = (hi - lo) / (grid_points - 1)
    grid = [lo + i * step for i in range(grid_points)]
    vals = [L1(p) for p in grid]

    roots: list[float] = []
    for i in range(grid_points - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            roots.append(grid[i])
        elif (a > 0.0) != (b > 0.0):
            roots.append(_bisect(L1, grid[i], grid[i + 1], tol))

    # Tangential roots: curvature sign changes where the slope also vanishes.
    curv = [L2(p) for p in grid]
    for i in range(grid_points - 1):
        if (curv[i] > 0.0) != (curv[i + 1] > 0.0):
            z = _bisect(L2, grid[i], grid[i + 1], tol)
            if abs(L1(z)) <= DEGENERATE_L1_TOL:
                roots.append(z)

    roots.sort()
    dedup: list[float] = []
    for r in roots:
        if not dedup or r - dedup[-1] > max(10.0 * tol, 1e-9):
            dedup.append(r)

    points = []
    for p in dedup:
        L, _, L2v = landscape_eval(spec, p)
        if abs(L2v) <= DEGENERATE_L2_TOL:
            kind = PointKind.DEGENERATE
        elif L2v < 0.0:
            kind = PointKind.LOCAL_MAX
        else:
            kind = PointKind.LOCAL_MIN
        points.append(StationaryPoint(p=p, L=L, L2=L2v, kind=kind))
    if not points:
        raise RuntimeError(
            "no stationary point found: the slope must change sign in (0, 1)"
        )
    return points


def classify_regime(spec) -> RegimeReport:
    """Stationary points plus regime label and (global) maximizer sets.

    Any degenerate stationary point forces the critical regime; otherwise
    two or more strict local maxima mean supercritical and exactly one
    means subcritical.
    """
    points = find_stationary_points(spec)
    maxima = [s for s in points if s.kind is PointKind.LOCAL_MAX]
    degenerate = [s for s in points if s.kind is PointKind.DEGENERATE]

    best = max(s.L for s in points)
    value_tol = VALUE_REL_TOL * max(1.0, max(abs(s.L) for s in points))
    m_beta = tuple(s for s in points if best - s.L <= value_tol)
    u_beta = tuple(s for s in m_beta if s.L2 < -DEGENERATE_L2_TOL)

    if degenerate:
        regime = Regime.CRITICAL
    elif len(maxima) >= 2:
        regime = Regime.SUPERCRITICAL
    elif len(maxima) == 1:
        regime = Regime.SUBCRITICAL
    else:
        regime = Regime.CRITICAL
    return RegimeReport(
        regime=regime,
        stationary_points=tuple(points),
        m_beta=m_beta,
        u_beta=u_beta,
    )


def resolve_well(spec, hint) -> StationaryPoint:
    """Pick the target well density from a hint.

    ``hint`` is "low" (smallest maximizer), "high" (largest), or a
    number (nearest strict local maximum).  Non-global wells are allowed
    on purpose: the smaller maxima are simulated too.
    """
    report = classify_regime(spec)
    maxima = report.local_maxima()
    if not maxima:
        raise ValueError("the landscape has no strict local maximum to target")
    if hint == "low":
        return maxima[0]
    if hint == "high":
        return maxima[-1]
    try:
        target = float(hint)
    except (TypeError, ValueError):
        raise ValueError(f"well hint {hint!r} is not 'low', 'high', or a number")
    return min(maxima, key=lambda s: abs(s.p - target))
