import math

import numpy as np
import pytest

from ergmwell.landscape import (
    DomainError,
    PointKind,
    Regime,
    classify_regime,
    entropy_term,
    find_stationary_points,
    landscape_eval,
    local_field,
    logistic,
    psi_phi,
    resolve_well,
)
from ergmwell.model import (
    ErgmSpec,
    two_well_hexagon_spec,
    two_well_tetrahedron_spec,
    two_well_triangle_spec,
)
from ergmwell.patterns import edge, generic, two_star


def edge_only(beta0):
    return ErgmSpec.from_kinds(["edge"], [beta0])


def thirty_two_edge_spec():
    # a 32-edge simple pattern: the first 32 edges of K9
    from itertools import combinations

    edges = list(combinations(range(9), 2))[:32]
    return ErgmSpec((edge(), two_star(), generic(9, edges)), (-1.17, 1.17, 0.06))


class TestEntropy:
    def test_half(self):
        assert entropy_term(0.5) == pytest.approx(0.5 * math.log(0.5), abs=1e-15)

    def test_boundaries(self):
        assert entropy_term(0.0) == 0.0
        assert entropy_term(1.0) == 0.0

    def test_symmetric(self):
        for p in np.linspace(0.0, 1.0, 101):
            assert entropy_term(p) == pytest.approx(entropy_term(1.0 - p), abs=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            entropy_term(-0.1)
        with pytest.raises(DomainError):
            entropy_term(1.1)


class TestEval:
    def test_edge_only_root_closed_form(self):
        beta0 = 0.8
        p = math.exp(2 * beta0) / (1 + math.exp(2 * beta0))
        _, L1, _ = landscape_eval(edge_only(beta0), p)
        assert abs(L1) < 1e-12

    def test_triangle_spec_near_root(self):
        _, L1, _ = landscape_eval(two_well_triangle_spec(), 0.18299)
        assert abs(L1) < 1e-3

    def test_finite_difference_oracle(self):
        spec = two_well_triangle_spec()
        h = 1e-6
        for p in np.arange(0.1, 0.95, 0.1):
            Lm = landscape_eval(spec, p - h)[0]
            Lp = landscape_eval(spec, p + h)[0]
            L, L1, L2 = landscape_eval(spec, p)
            assert (Lp - Lm) / (2 * h) == pytest.approx(L1, abs=1e-5)
            assert (Lp - 2 * L + Lm) / h**2 == pytest.approx(L2, rel=1e-3)

    def test_boundary_rejected(self):
        with pytest.raises(DomainError):
            landscape_eval(edge_only(0.0), 0.0)

    def test_depends_only_on_edge_totals(self):
        tet, hexa = two_well_tetrahedron_spec(), two_well_hexagon_spec()
        for p in np.linspace(0.05, 0.95, 19):
            a = landscape_eval(tet, p)
            b = landscape_eval(hexa, p)
            assert a == pytest.approx(b, abs=1e-14)


class TestFixedPointMap:
    def test_zero_betas_give_half(self):
        spec = ErgmSpec.from_kinds(["edge", "twostar", "triangle"], [0.0, 0.0, 0.0])
        for p in np.linspace(0, 1, 11):
            assert psi_phi(spec, p)[1] == 0.5

    def test_tetrahedron_well_fixed_points(self):
        spec = two_well_tetrahedron_spec()
        for p in (0.28937, 0.99666):
            assert abs(psi_phi(spec, p)[1] - p) < 1e-4

    def test_triangle_high_well_fixed_point(self):
        assert abs(psi_phi(two_well_triangle_spec(), 0.93653)[1] - 0.93653) < 1e-4

    def test_logistic_stable(self):
        assert logistic(1000.0) == 1.0
        assert logistic(-1000.0) == pytest.approx(0.0, abs=1e-300)
        assert logistic(0.0) == 0.5

    def test_fixed_points_are_critical_points(self):
        # agreement of the two characterizations at refined roots, and
        # disagreement away from them
        rng = np.random.default_rng(17)
        specs = [
            two_well_triangle_spec(),
            two_well_tetrahedron_spec(),
            edge_only(0.3),
            ErgmSpec.from_kinds(["edge", "twostar"], [-0.4, 0.6]),
        ]
        for spec in specs:
            for s in find_stationary_points(spec):
                z, img = psi_phi(spec, s.p)
                assert abs(img - s.p) <= 1e-9
                assert abs(landscape_eval(spec, s.p)[1]) <= 1e-7
                off = min(max(s.p + rng.choice([-0.01, 0.01]), 1e-4), 1 - 1e-4)
                if abs(landscape_eval(spec, off)[1]) > 1e-5:
                    assert abs(psi_phi(spec, off)[1] - off) > 1e-9

    def test_attraction_matches_curvature(self):
        # sign of (slope of the fixed-point map - 1) equals sign of L''
        h = 1e-6
        for spec in (two_well_triangle_spec(), two_well_tetrahedron_spec()):
            for s in find_stationary_points(spec):
                if s.kind is PointKind.DEGENERATE:
                    continue
                dphi = (psi_phi(spec, s.p + h)[1] - psi_phi(spec, s.p - h)[1]) / (2 * h)
                assert math.copysign(1, dphi - 1) == math.copysign(1, s.L2)


class TestStationaryPoints:
    def test_triangle_spec_wells(self):
        pts = find_stationary_points(two_well_triangle_spec())
        maxima = [s.p for s in pts if s.kind is PointKind.LOCAL_MAX]
        assert len(maxima) == 2
        assert abs(maxima[0] - 0.18299) < 1e-3
        assert abs(maxima[1] - 0.93653) < 1e-3

    def test_tetrahedron_spec_wells(self):
        pts = find_stationary_points(two_well_tetrahedron_spec())
        maxima = [s.p for s in pts if s.kind is PointKind.LOCAL_MAX]
        assert abs(maxima[0] - 0.28937) < 1e-3
        assert abs(maxima[-1] - 0.99666) < 1e-3

    def test_edge_only_unique_root(self):
        pts = find_stationary_points(edge_only(0.5))
        assert len(pts) == 1
        assert pts[0].p == pytest.approx(math.e / (1 + math.e), abs=1e-9)

    def test_thirty_two_edge_spec_has_three_maxima(self):
        pts = find_stationary_points(thirty_two_edge_spec())
        maxima = [s for s in pts if s.kind is PointKind.LOCAL_MAX]
        assert len(maxima) >= 3

    def test_roots_meet_tolerance(self):
        for s in find_stationary_points(two_well_triangle_spec()):
            assert abs(landscape_eval(two_well_triangle_spec(), s.p)[1]) <= 1e-10

    def test_grid_too_small_rejected(self):
        with pytest.raises(ValueError):
            find_stationary_points(edge_only(0.0), grid_points=10)


class TestRegime:
    def test_triangle_spec_supercritical(self):
        report = classify_regime(two_well_triangle_spec())
        assert report.regime is Regime.SUPERCRITICAL
        assert len([s for s in report.local_maxima() if s.L2 < 0]) == 2

    def test_zero_betas_subcritical(self):
        spec = ErgmSpec.from_kinds(["edge", "twostar", "triangle"], [0.0, 0.0, 0.0])
        report = classify_regime(spec)
        assert report.regime is Regime.SUBCRITICAL
        assert report.stationary_points[0].p == pytest.approx(0.5, abs=1e-9)

    def test_maximizer_sets_nest(self):
        report = classify_regime(two_well_tetrahedron_spec())
        assert set(report.u_beta) <= set(report.m_beta)
        maxima = set(report.local_maxima())
        assert set(report.m_beta) <= maxima
        # the high well is the global maximizer for this spec
        assert report.m_beta[0].p == pytest.approx(0.996655, abs=1e-4)

    def test_triangle_global_maximizer_is_low_well(self):
        report = classify_regime(two_well_triangle_spec())
        assert len(report.m_beta) == 1
        assert report.m_beta[0].p == pytest.approx(0.18277, abs=1e-4)

    def test_tetrahedron_hexagon_identical_points(self):
        a = find_stationary_points(two_well_tetrahedron_spec())
        b = find_stationary_points(two_well_hexagon_spec())
        assert len(a) == len(b)
        for s, t in zip(a, b):
            assert abs(s.p - t.p) < 1e-8

    def test_degenerate_forces_critical(self):
        # tune (beta0, beta1) so that the slope has a tangential root at q:
        # curvature zero gives beta1, then beta0 makes the slope vanish too
        q = 0.3
        beta1 = 1.0 / (4 * q * (1 - q))
        beta0 = 0.5 * math.log(q / (1 - q)) - 2 * beta1 * q
        spec = ErgmSpec.from_kinds(["edge", "twostar"], [beta0, beta1])
        report = classify_regime(spec)
        assert report.regime is Regime.CRITICAL
        degenerate = [s for s in report.stationary_points if s.kind is PointKind.DEGENERATE]
        assert any(abs(s.p - q) < 1e-4 for s in degenerate)


class TestResolveWell:
    def test_low_high(self):
        spec = two_well_triangle_spec()
        assert resolve_well(spec, "low").p == pytest.approx(0.18277, abs=1e-4)
        assert resolve_well(spec, "high").p == pytest.approx(0.936532, abs=1e-4)

    def test_numeric_hint(self):
        spec = two_well_triangle_spec()
        assert resolve_well(spec, 0.2).p == pytest.approx(0.18277, abs=1e-4)
        assert resolve_well(spec, "0.9").p == pytest.approx(0.936532, abs=1e-4)

    def test_bad_hint(self):
        with pytest.raises(ValueError):
            resolve_well(two_well_triangle_spec(), "middle")


class TestSpecValidation:
    def test_negative_higher_beta_rejected(self):
        with pytest.raises(ValueError):
            ErgmSpec.from_kinds(["edge", "triangle"], [0.0, -0.1])

    def test_first_must_be_edge(self):
        with pytest.raises(ValueError):
            ErgmSpec.from_kinds(["triangle"], [0.5])

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            ErgmSpec.from_kinds(["edge", "triangle"], [0.5])

    def test_field_domain(self):
        with pytest.raises(DomainError):
            local_field(edge_only(0.0), 1.5)
