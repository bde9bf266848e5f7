import math

import numpy as np
import pytest

from ergmwell.graphs import sample_er
from ergmwell.stats import (
    DegenerateSampleError,
    FitResult,
    StatSeries,
    empirical_covariance,
    ks_normal,
    loglog_fit,
    normal_cdf,
    summary_stats,
)


class TestSummaryStats:
    def test_constant(self):
        assert summary_stats([1.0, 1.0, 1.0]) == (1.0, 0.0)

    def test_two_points(self):
        mean, std = summary_stats([-1.0, 1.0])
        assert mean == 0.0
        assert std == pytest.approx(math.sqrt(2), abs=1e-15)

    def test_uniform_moments(self):
        rng = np.random.default_rng(123)
        vals = rng.random(100_000)
        mean, std = summary_stats(vals)
        assert abs(mean - 0.5) < 0.005
        assert abs(std - math.sqrt(1 / 12)) < 0.005

    def test_too_few(self):
        with pytest.raises(ValueError):
            summary_stats([3.0])

    def test_shift_invariance(self):
        vals = [1.0, 4.0, 2.5, -3.0]
        m0, s0 = summary_stats(vals)
        m1, s1 = summary_stats([v + 7.25 for v in vals])
        assert m1 == pytest.approx(m0 + 7.25, abs=1e-12)
        assert s1 == pytest.approx(s0, abs=1e-12)


class TestStatSeries:
    def test_requires_increasing_sizes(self):
        with pytest.raises(ValueError):
            StatSeries("x", (8, 8, 16), (1.0, 2.0, 3.0))

    def test_requires_finite(self):
        with pytest.raises(ValueError):
            StatSeries("x", (8, 16), (1.0, float("nan")))


class TestLogLogFit:
    def test_exact_linear_power(self):
        series = StatSeries("lin", (8, 16, 32), tuple(0.4 * n for n in (8, 16, 32)))
        fit = loglog_fit(series)
        assert fit.slope == pytest.approx(1.0, abs=1e-12)
        assert fit.intercept == pytest.approx(math.log(0.4), abs=1e-12)
        assert fit.residual == pytest.approx(0.0, abs=1e-12)

    def test_constant_series(self):
        series = StatSeries("c", (8, 16, 32, 64), (2.5,) * 4)
        assert loglog_fit(series).slope == pytest.approx(0.0, abs=1e-12)

    def test_perturbed_quadratic(self):
        rng = np.random.default_rng(5)
        ns = (8, 11, 16, 22, 32, 45, 64)
        values = tuple(0.02 * n**2 * (1 + rng.uniform(-0.05, 0.05)) for n in ns)
        fit = loglog_fit(StatSeries("q", ns, values))
        assert abs(fit.slope - 2.0) < 0.1

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            loglog_fit(StatSeries("bad", (8, 16, 32), (1.0, 0.0, 2.0)))

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            loglog_fit(StatSeries("short", (8, 16), (1.0, 2.0)))


class TestKsNormal:
    def test_two_point_sample(self):
        # +-1 standardizes to +-1/sqrt(2); the sup sits at the jump
        want = abs(0.5 - normal_cdf(-1 / math.sqrt(2)))
        assert ks_normal([-1.0, 1.0]) == pytest.approx(want, abs=1e-12)
        assert want == pytest.approx(0.2602, abs=1e-4)

    def test_normal_quantile_grid(self):
        # inverse-CDF grid of the standard normal: nearly perfect fit
        from statistics import NormalDist

        grid = [NormalDist().inv_cdf((i - 0.5) / 1000) for i in range(1, 1001)]
        assert ks_normal(grid) <= 0.01

    def test_degenerate_sample(self):
        with pytest.raises(DegenerateSampleError):
            ks_normal([2.0, 2.0, 2.0])

    def test_affine_invariance(self):
        rng = np.random.default_rng(9)
        vals = rng.normal(size=200)
        a = ks_normal(vals)
        b = ks_normal(5.0 * vals - 3.0)
        assert a == pytest.approx(b, abs=1e-12)

    def test_uniform_sample_far_from_normal(self):
        rng = np.random.default_rng(10)
        vals = rng.random(5000)
        assert ks_normal(vals) > 0.04


class TestEmpiricalCovariance:
    def test_independent_edges(self):
        rng = np.random.default_rng(11)
        samples = [sample_er(10, 0.5, rng) for _ in range(2000)]
        cov = empirical_covariance(samples, (0, 1), (2, 3))
        assert abs(cov) < 3 * 0.25 / math.sqrt(2000)

    def test_perfectly_correlated(self):
        # synthetic samples where two edges always match
        rng = np.random.default_rng(12)
        samples = []
        q = 0.3
        from ergmwell.graphs import GraphState

        hits = 0
        for _ in range(4000):
            g = GraphState(4)
            bit = rng.random() < q
            hits += bit
            g.set_edge(0, 1, bit)
            g.set_edge(2, 3, bit)
            samples.append(g)
        cov = empirical_covariance(samples, (0, 1), (2, 3))
        qhat = hits / 4000
        assert cov == pytest.approx(qhat * (1 - qhat), abs=2e-3)

    def test_needs_two_samples(self):
        from ergmwell.graphs import GraphState

        with pytest.raises(ValueError):
            empirical_covariance([GraphState(4)], (0, 1), (1, 2))

    def test_distinct_edges_required(self):
        from ergmwell.graphs import GraphState

        samples = [GraphState(4), GraphState(4)]
        with pytest.raises(ValueError):
            empirical_covariance(samples, (0, 1), (1, 0))


def test_fit_result_fields():
    fit = FitResult(slope=1.0, intercept=0.0, residual=0.0)
    assert fit.slope == 1.0
