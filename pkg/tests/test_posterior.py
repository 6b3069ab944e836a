import dataclasses

import numpy as np
import pytest

from config import EXAMPLE_SET, LONG_EVIDENCE, SHORT_EVIDENCE
from errors import ValidationError
from inference.comparison import fit_model
from inference.models import Component, Family, ModelSpec, ResponseModel, Variant
from inference.optimizer import SearchConfig
from inference.posterior import posterior_predictive, summarize_posterior
from inference.sampler import MCMCConfig
from simulation.synthetic import SyntheticConfig, generate_synthetic
from world.grid import WorldPrior

SPEAKER_DEPENDENT = ModelSpec(Family.RSA, Variant.SPEAKER_DEPENDENT, (Component.J0, Component.J1))
QUICK_MCMC = MCMCConfig(chains=2, samples=15, burnin=20, lag=1, seed=3)
QUICK_SEARCH = SearchConfig(grid_budget=16)


@pytest.fixture(scope="module")
def fitted():
    prior = WorldPrior.from_values(range(1, 10), 5, 5)
    cfg = SyntheticConfig(prior, EXAMPLE_SET, LONG_EVIDENCE, SHORT_EVIDENCE, n_participants=40, seed=12)
    records = generate_synthetic(cfg)
    return prior, records, fit_model(SPEAKER_DEPENDENT, records, prior, QUICK_MCMC, QUICK_SEARCH)


class TestSummarizePosterior:
    def test_one_row_per_parameter(self, fitted):
        _, _, fit = fitted
        table = summarize_posterior(fit)
        assert table["parameter"].tolist() == fit.param_names
        assert list(table.columns) == ["parameter", "map", "mean", "sd", "q2.5", "q50", "q97.5"]

    def test_statistics_of_the_pooled_chains(self, fitted):
        _, _, fit = fitted
        draws = np.concatenate(fit.chains)
        table = summarize_posterior(fit).set_index("parameter")
        assert table.loc["beta", "mean"] == pytest.approx(draws[:, 0].mean())
        assert table.loc["beta", "sd"] == pytest.approx(draws[:, 0].std(ddof=1))
        assert table.loc["offset", "q50"] == pytest.approx(np.median(draws[:, fit.param_names.index("offset")]))
        assert (table["q2.5"] <= table["q50"]).all() and (table["q50"] <= table["q97.5"]).all()

    def test_known_draws(self, make_fit):
        fit = make_fit(np.random.default_rng(4).normal(-1.0, 0.3, size=(5, 3)), chains=1)
        row = summarize_posterior(fit).iloc[0]
        assert row["mean"] == pytest.approx(0.5)
        assert row["q50"] == pytest.approx(0.5)
        assert row["q2.5"] == pytest.approx(0.025)
        assert row["q97.5"] == pytest.approx(0.975)
        assert row["map"] == 1.0

    def test_no_samples(self, make_fit):
        fit = dataclasses.replace(make_fit(np.random.default_rng(4).normal(-1.0, 0.3, size=(4, 2))), chains=[])
        with pytest.raises(ValidationError):
            summarize_posterior(fit)


class TestPosteriorPredictive:
    def test_cells(self, fitted):
        prior, records, fit = fitted
        table = posterior_predictive(fit, records, prior)
        assert list(table.columns) == ["speaker_group", "evidence", "goal", "n", "observed", "predicted",
                                       "q2.5", "q97.5"]
        assert table["n"].sum() == len(records)
        assert set(table["speaker_group"]) <= {"strongest", "second_strongest", "weaker"}
        assert (table["q2.5"] <= table["q97.5"]).all()

    def test_observed_is_the_cell_mean(self, fitted):
        prior, records, fit = fitted
        table = posterior_predictive(fit, records, prior)
        row = table.iloc[0]
        ys = [r.y for r in records if r.speaker_group.value == row["speaker_group"]
              and r.evidence_1 == row["evidence"] and r.goal.value == row["goal"]]
        assert row["observed"] == pytest.approx(np.mean(ys))

    def test_single_draw_matches_the_mixture_mean(self, fitted):
        prior, records, fit = fitted
        fit = dataclasses.replace(fit, chains=[fit.chains[0][:1]])
        table = posterior_predictive(fit, records, prior)
        model = ResponseModel(SPEAKER_DEPENDENT, records, prior)
        params = model.space.vector(fit.chains[0][0])
        means = np.stack([model.component_means(c, params) for c in SPEAKER_DEPENDENT.components], axis=1)
        predicted = (model.weights(params) * means).sum(axis=1) + params["offset"]
        row = table.iloc[-1]
        mask = np.array([r.speaker_group.value == row["speaker_group"] and r.evidence_1 == row["evidence"]
                         and r.goal.value == row["goal"] for r in records])
        assert row["predicted"] == pytest.approx(predicted[mask].mean())
        assert row["q2.5"] == pytest.approx(row["q97.5"])

    def test_thinned_draws(self, fitted):
        prior, records, fit = fitted
        full = posterior_predictive(fit, records, prior, max_draws=None)
        thinned = posterior_predictive(fit, records, prior, max_draws=5)
        assert len(full) == len(thinned)
        assert np.all(np.abs(full["predicted"] - thinned["predicted"]) < 0.5)

    def test_other_data_is_rejected(self, fitted):
        prior, records, fit = fitted
        with pytest.raises(ValidationError):
            posterior_predictive(fit, records[:-1], prior)
