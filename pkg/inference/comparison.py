"""
Full fitting pipeline and cross-model comparison.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np
import pandas as pd

from errors import ComparisonError
from inference.criteria import Criterion, PsisResult, psis_loo, waic
from inference.models import ModelSettings, ModelSpec, ParamVector, ResponseModel
from inference.optimizer import MapOptimizer, SearchConfig
from inference.records import ResponseRecord, data_fingerprint
from inference.sampler import MCMCConfig, MetropolisSampler
from world.grid import WorldPrior

logger = logging.getLogger(__name__)


@dataclass
class FitResult:
    model: str
    map_params: ParamVector
    max_loglik: float
    param_names: List[str]
    chains: List[np.ndarray]  # one (samples, dim) array per chain
    loglik_matrix: np.ndarray  # (all samples, data)
    waic: Criterion
    psis_loo: PsisResult
    data_fingerprint: str
    acceptance: List[float] = field(default_factory=list)
    provenance: Dict[str, str] = field(default_factory=dict)

    @property
    def n_samples(self) -> int:
        return self.loglik_matrix.shape[0]

    @property
    def n_data(self) -> int:
        return self.loglik_matrix.shape[1]

    def samples(self) -> List[ParamVector]:
        names = tuple(self.param_names)
        return [ParamVector(names, tuple(float(v) for v in row)) for chain in self.chains for row in chain]


def fit_model(spec: ModelSpec, records: Sequence[ResponseRecord], prior: WorldPrior,
              mcmc: MCMCConfig = MCMCConfig(), search: SearchConfig = SearchConfig(),
              settings: ModelSettings = ModelSettings()) -> FitResult:
    """
    MAP search, MH sampling and both information criteria for one model.

    Args:
        spec: Model to fit
        records: Validated response records
        prior: World prior used by the listener models
        mcmc: Sampler configuration
        search: MAP search configuration
        settings: Response-model settings

    Returns:
        FitResult
    """
    model = ResponseModel(spec, records, prior, settings)
    logger.info(f"Fitting {spec.label} to {model.n_data} records")

    optimizer = MapOptimizer(lambda x: model.log_likelihood(model.space.vector(x))[0], model.space, search)
    map_params, max_loglik = optimizer.run()

    sampled = MetropolisSampler(model.log_posterior, model.space, mcmc, start=map_params.array).run()
    loglik = sampled.loglik_matrix
    return FitResult(
        model=spec.label,
        map_params=map_params,
        max_loglik=max_loglik,
        param_names=list(model.space.names),
        chains=[c.samples for c in sampled.chains],
        loglik_matrix=loglik,
        waic=waic(loglik),
        psis_loo=psis_loo(loglik),
        data_fingerprint=data_fingerprint(records),
        acceptance=[c.acceptance for c in sampled.chains],
    )


def compare_models(fits: Sequence[FitResult]) -> pd.DataFrame:
    """
    Rank fits by WAIC (lower is better).

    Differences to the best model smaller than one standard error of the pointwise
    difference are flagged as indistinguishable.

    Returns:
        DataFrame with one row per model
    """
    if not fits:
        raise ComparisonError("nothing to compare")
    fingerprints = {f.data_fingerprint for f in fits}
    if len(fingerprints) > 1:
        raise ComparisonError(f"fits were run on different data: {sorted(fingerprints)}")

    ordered = sorted(fits, key=lambda f: f.waic.estimate)
    best = ordered[0]
    rows = []
    for rank, fit in enumerate(ordered, start=1):
        diff = fit.waic.pointwise - best.waic.pointwise
        delta = float(np.sum(diff))
        delta_se = float(np.sqrt(diff.size * np.var(diff)))
        rows.append({
            "rank": rank,
            "model": fit.model,
            "max_loglik": fit.max_loglik,
            "waic": fit.waic.estimate,
            "waic_se": fit.waic.se,
            "p_waic": fit.waic.penalty,
            "psis_loo": fit.psis_loo.estimate,
            "psis_loo_se": fit.psis_loo.se,
            "p_loo": fit.psis_loo.penalty,
            "delta_waic": delta,
            "delta_se": delta_se,
            "indistinguishable": fit is not best and abs(delta) <= delta_se,
            "max_pareto_k": float(np.nanmax(fit.psis_loo.pareto_k)) if np.isfinite(fit.psis_loo.pareto_k).any()
            else float("nan"),
        })
    table = pd.DataFrame(rows)
    if len(ordered) > 1:
        # ties with the best model are flagged on the best row too
        table.loc[0, "indistinguishable"] = bool(table["indistinguishable"].iloc[1:].any())
    return table
