"""
FitResult documents: JSON with flat arrays and their shapes.
"""
import json
import logging
import math
import os
from typing import Any, Dict, List

import numpy as np

from datafiles.provenance import Provenance
from errors import DataFormatError
from inference.comparison import FitResult
from inference.criteria import Criterion, PsisResult
from inference.models import ParamVector

logger = logging.getLogger(__name__)

FORMAT = "persuasion-fit/1"


def _number(value: float):
    value = float(value)
    return value if math.isfinite(value) else None


def _numbers(values) -> List:
    return [_number(v) for v in np.asarray(values, dtype=float).ravel(order="F")]


def _array(block: Dict[str, Any]) -> np.ndarray:
    values = np.array([np.nan if v is None else v for v in block["values"]], dtype=float)
    return values.reshape(block["shape"], order="F")


def _packed(values: np.ndarray) -> Dict[str, Any]:
    """Column-major flat values with their dimensions."""
    values = np.asarray(values, dtype=float)
    return {"shape": list(values.shape), "order": "F", "values": _numbers(values)}


def _criterion(c: Criterion) -> Dict[str, Any]:
    return {"estimate": _number(c.estimate), "se": _number(c.se), "penalty": _number(c.penalty),
            "pointwise": _numbers(c.pointwise)}


def fit_to_dict(fit: FitResult) -> Dict[str, Any]:
    chains = np.stack(fit.chains) if fit.chains else np.zeros((0, 0, len(fit.param_names)))
    loo = _criterion(fit.psis_loo)
    loo["pareto_k"] = _numbers(fit.psis_loo.pareto_k)
    loo["fallback"] = [bool(v) for v in fit.psis_loo.fallback]
    return {
        "format": FORMAT,
        "provenance": dict(fit.provenance),
        "model": fit.model,
        "data_fingerprint": fit.data_fingerprint,
        "param_names": list(fit.param_names),
        "map_params": {k: _number(v) for k, v in fit.map_params.as_dict().items()},
        "max_loglik": _number(fit.max_loglik),
        "acceptance": [_number(a) for a in fit.acceptance],
        "samples": _packed(chains),
        "loglik": _packed(fit.loglik_matrix),
        "waic": _criterion(fit.waic),
        "psis_loo": loo,
    }


def fit_from_dict(data: Dict[str, Any]) -> FitResult:
    if data.get("format") != FORMAT:
        raise DataFormatError(f"not a fit document (format {data.get('format')!r}, expected {FORMAT})")
    try:
        names = tuple(data["param_names"])
        chains = _array(data["samples"])
        waic_block, loo_block = data["waic"], data["psis_loo"]
        loo = PsisResult(
            _nan(loo_block["estimate"]), _nan(loo_block["se"]), _nan(loo_block["penalty"]),
            _flat(loo_block["pointwise"]),
            pareto_k=_flat(loo_block["pareto_k"]),
            fallback=np.array(loo_block["fallback"], dtype=bool),
        )
        return FitResult(
            model=data["model"],
            map_params=ParamVector(names, tuple(_nan(data["map_params"][n]) for n in names)),
            max_loglik=_nan(data["max_loglik"]),
            param_names=list(names),
            chains=[chains[i] for i in range(chains.shape[0])],
            loglik_matrix=_array(data["loglik"]),
            waic=Criterion(_nan(waic_block["estimate"]), _nan(waic_block["se"]), _nan(waic_block["penalty"]),
                           _flat(waic_block["pointwise"])),
            psis_loo=loo,
            data_fingerprint=data["data_fingerprint"],
            acceptance=[_nan(a) for a in data.get("acceptance", [])],
            provenance=dict(data.get("provenance", {})),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"malformed fit document: {e}")


def _nan(value) -> float:
    return float("nan") if value is None else float(value)


def _flat(values) -> np.ndarray:
    return np.array([np.nan if v is None else v for v in values], dtype=float)


def save_fit(fit: FitResult, path: str, provenance: Provenance = None) -> None:
    """
    Write a fit document.

    Args:
        fit: The fit to save
        path: Output JSON path
        provenance: Stamp to record (replaces the fit's own)
    """
    if provenance is not None:
        fit.provenance = provenance.as_dict()
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(fit_to_dict(fit), f, indent=1, sort_keys=True, allow_nan=False)
        f.write("\n")
    logger.info(f"Saved fit {fit.model} to {path}")


def load_fit(path: str) -> FitResult:
    if not os.path.isfile(path):
        raise DataFormatError(f"fit file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise DataFormatError(f"cannot parse {path}: {e}")
    return fit_from_dict(data)
