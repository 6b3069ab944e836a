"""
Posterior summaries of a fit: parameter quantiles and the posterior predictive belief per speaker group.
"""
import logging
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from errors import ValidationError
from inference.comparison import FitResult
from inference.models import ModelSettings, ModelSpec, ResponseModel
from inference.records import ResponseRecord, data_fingerprint
from world.grid import WorldPrior

logger = logging.getLogger(__name__)

QUANTILES = (0.025, 0.5, 0.975)
ALL_GROUPS = "all"


def _draws(fit: FitResult) -> np.ndarray:
    if not fit.chains:
        raise ValidationError(f"{fit.model} has no posterior samples")
    return np.concatenate(fit.chains, axis=0)


def summarize_posterior(fit: FitResult) -> pd.DataFrame:
    """
    Per-parameter summary of the pooled chains.

    Args:
        fit: A finished fit

    Returns:
        DataFrame with columns parameter, map, mean, sd, q2.5, q50, q97.5
    """
    draws = _draws(fit)
    low, mid, high = np.quantile(draws, QUANTILES, axis=0)
    sd = draws.std(axis=0, ddof=1) if draws.shape[0] > 1 else np.zeros(draws.shape[1])
    return pd.DataFrame({
        "parameter": fit.param_names,
        "map": [fit.map_params[name] for name in fit.param_names],
        "mean": draws.mean(axis=0),
        "sd": sd,
        "q2.5": low,
        "q50": mid,
        "q97.5": high,
    })


def _thin(draws: np.ndarray, max_draws: Optional[int]) -> np.ndarray:
    if max_draws is None or draws.shape[0] <= max_draws:
        return draws
    keep = np.linspace(0, draws.shape[0] - 1, max_draws).round().astype(int)
    return draws[keep]


def posterior_predictive(fit: FitResult, records: Sequence[ResponseRecord], prior: WorldPrior,
                         settings: ModelSettings = ModelSettings(),
                         max_draws: Optional[int] = 500) -> pd.DataFrame:
    """
    Predicted mean response per speaker group and shown stick, with a 95% band over posterior draws.

    Each draw gives every record the mixture mean of its components plus the offset; records are
    averaged within a cell before taking quantiles across draws.

    Args:
        fit: A finished fit of the model named in fit.model
        records: The records the model was fitted to
        prior: World prior used for the fit
        settings: Response-model settings used for the fit
        max_draws: Evenly spaced subset of the pooled draws to use (None for all)

    Returns:
        DataFrame with columns speaker_group, evidence, goal, n, observed, predicted, q2.5, q97.5
    """
    if fit.data_fingerprint and fit.data_fingerprint != data_fingerprint(records):
        raise ValidationError(f"{fit.model} was fitted to different data")
    spec = ModelSpec.from_label(fit.model)
    model = ResponseModel(spec, records, prior, settings)
    space = model.space
    if tuple(fit.param_names) != tuple(space.names):
        raise ValidationError(f"fit parameters {fit.param_names} do not match {spec.label}")
    draws = _thin(_draws(fit), max_draws)
    logger.info(f"Posterior predictive for {spec.label} over {draws.shape[0]} draws")

    predicted = np.empty((draws.shape[0], model.n_data))
    for i, x in enumerate(draws):
        params = space.vector(x)
        means = np.stack([model.component_means(c, params) for c in spec.components], axis=1)
        predicted[i] = np.sum(model.weights(params) * means, axis=1) + params["offset"]

    groups = [r.speaker_group.value if r.speaker_group is not None else ALL_GROUPS for r in records]
    cells = pd.DataFrame({
        "speaker_group": groups,
        "evidence": model.evidence,
        "goal": [r.goal.value for r in records],
        "y": model.y,
    })
    rows = []
    for (group, evidence, goal), cell in cells.groupby(["speaker_group", "evidence", "goal"], sort=True):
        per_draw = predicted[:, cell.index.to_numpy()].mean(axis=1)
        low, high = np.quantile(per_draw, (QUANTILES[0], QUANTILES[-1]))
        rows.append({
            "speaker_group": group,
            "evidence": evidence,
            "goal": goal,
            "n": len(cell),
            "observed": float(cell["y"].mean()),
            "predicted": float(per_draw.mean()),
            "q2.5": float(low),
            "q97.5": float(high),
        })
    return pd.DataFrame(rows)
