import numpy as np
import pytest
from scipy.stats import norm

from inference.models import ParameterSpace
from inference.optimizer import MapOptimizer, SearchConfig
from inference.sampler import MCMCConfig, MetropolisSampler, mh_sample, reflect

UNIT = ParameterSpace(("theta",), (0.0,), (10.0,))
WIDE = ParameterSpace(("theta",), (-10.0,), (10.0,))


def flat(space):
    def log_density(x):
        return space.log_prior(x), np.zeros(1)
    return log_density


class TestReflect:
    def test_inside_unchanged(self):
        x = np.array([0.3, 4.0])
        assert np.array_equal(reflect(x, np.zeros(2), np.full(2, 5.0)), x)

    def test_folds_at_both_edges(self):
        lows, highs = np.array([0.0, 0.0]), np.array([1.0, 1.0])
        assert reflect(np.array([-0.3, 1.2]), lows, highs) == pytest.approx([0.3, 0.8])

    def test_zero_width_dimension(self):
        assert reflect(np.array([7.0]), np.array([2.0]), np.array([2.0])) == pytest.approx([2.0])


class TestMetropolis:
    def test_flat_target_is_uniform(self):
        config = MCMCConfig(chains=4, samples=1000, burnin=1000, lag=2, seed=1)
        result = mh_sample(flat(UNIT), UNIT, config)
        samples = result.samples[:, 0]
        assert samples.shape == (4000,)
        assert samples.min() >= 0.0 and samples.max() <= 10.0
        assert samples.mean() == pytest.approx(5.0, abs=0.2)
        assert samples.var() == pytest.approx(100.0 / 12.0, abs=0.6)

    def test_same_seed_same_chains(self):
        config = MCMCConfig(chains=2, samples=50, burnin=100, lag=3, seed=42)
        first = mh_sample(flat(UNIT), UNIT, config)
        second = mh_sample(flat(UNIT), UNIT, config)
        for a, b in zip(first.chains, second.chains):
            assert np.array_equal(a.samples, b.samples)

    def test_different_seeds_differ(self):
        a = mh_sample(flat(UNIT), UNIT, MCMCConfig(chains=1, samples=50, burnin=100, lag=1, seed=1))
        b = mh_sample(flat(UNIT), UNIT, MCMCConfig(chains=1, samples=50, burnin=100, lag=1, seed=2))
        assert not np.array_equal(a.samples, b.samples)

    def test_chains_start_at_the_given_point(self):
        def peaked(x):
            return -0.5 * ((x[0] - 3.0) / 1e-3) ** 2, np.zeros(1)

        result = mh_sample(peaked, UNIT, MCMCConfig(chains=2, samples=5, burnin=0, lag=1, seed=0),
                           start=np.array([3.0]))
        assert result.samples[:, 0] == pytest.approx(np.full(10, 3.0), abs=0.01)

    def test_normal_mean_posterior(self):
        y = np.random.default_rng(12).normal(1.5, 1.0, size=20)

        def log_density(x):
            lp = WIDE.log_prior(x)
            if not np.isfinite(lp):
                return lp, np.full(y.size, -np.inf)
            ll = norm.logpdf(y, loc=x[0], scale=1.0)
            return lp + ll.sum(), ll

        result = MetropolisSampler(log_density, WIDE,
                                   MCMCConfig(chains=4, samples=500, burnin=2000, lag=5, seed=3)).run()
        samples = result.samples[:, 0]
        assert samples.mean() == pytest.approx(y.mean(), abs=0.03)
        assert samples.std() == pytest.approx(np.sqrt(1 / 20), rel=0.15)
        assert result.loglik_matrix.shape == (2000, 20)
        assert all(0.05 <= c.acceptance <= 0.8 for c in result.chains)


class TestMapOptimizer:
    def test_one_dimension(self):
        optimizer = MapOptimizer(lambda x: -(x[0] - 3.7) ** 2, UNIT, SearchConfig(grid_budget=11))
        params, value = optimizer.run()
        assert params["theta"] == pytest.approx(3.7, abs=1e-4)
        assert value == pytest.approx(0.0, abs=1e-8)

    def test_two_dimensions(self):
        space = ParameterSpace(("a", "b"), (-2.0, -2.0), (2.0, 2.0))
        optimizer = MapOptimizer(lambda x: -(x[0] - 1.0) ** 2 - 2.0 * (x[1] + 0.5) ** 2, space,
                                 SearchConfig(grid_budget=25))
        assert optimizer.grid_points() == 5
        params, _ = optimizer.run()
        assert params.values == pytest.approx((1.0, -0.5), abs=1e-3)

    def test_optimum_on_the_boundary(self):
        params, _ = MapOptimizer(lambda x: x[0], UNIT, SearchConfig(grid_budget=16)).run()
        assert params["theta"] == 10.0
