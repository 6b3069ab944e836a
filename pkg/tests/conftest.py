import numpy as np
import pytest

from inference.comparison import FitResult
from inference.criteria import psis_loo, waic
from inference.models import ParamVector
from world.grid import WorldPrior


@pytest.fixture
def experiment_prior():
    return WorldPrior.from_values(range(1, 10), 5, 5)


@pytest.fixture
def extended_prior():
    return WorldPrior.from_values(range(1, 11), 5, 5)


@pytest.fixture
def tiny_prior():
    """Grid {1, 2, 3}, two sticks: six multisets."""
    return WorldPrior.from_values((1, 2, 3), 2, 2)


@pytest.fixture(autouse=True)
def no_seed_env(monkeypatch):
    monkeypatch.delenv("SEED", raising=False)


@pytest.fixture
def make_fit():
    """Build a FitResult straight from a log-likelihood matrix."""
    def build(loglik, model="m", fingerprint="abc", chains=2):
        loglik = np.asarray(loglik, dtype=float)
        draws = np.linspace(0.0, 1.0, loglik.shape[0]).reshape(-1, 1)
        return FitResult(
            model=model,
            map_params=ParamVector(("beta",), (1.0,)),
            max_loglik=float(loglik.sum(axis=1).max()),
            param_names=["beta"],
            chains=list(np.split(draws, chains)),
            loglik_matrix=loglik,
            waic=waic(loglik),
            psis_loo=psis_loo(loglik),
            data_fingerprint=fingerprint,
            acceptance=[0.3] * chains,
        )
    return build
