"""
Deterministic MAP search: a coarse grid over the prior box, then coordinate-wise refinement.
"""
import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from inference.models import ModelSettings, ParameterSpace, ParamVector, ResponseModel, ModelSpec
from inference.records import ResponseRecord
from world.grid import WorldPrior


@dataclass(frozen=True)
class SearchConfig:
    grid_budget: int = 4096
    max_rounds: int = 20
    tolerance: float = 1e-6


class MapOptimizer:
    """Maximize an objective over a bounded box."""

    def __init__(self, objective: Callable[[np.ndarray], float], space: ParameterSpace,
                 config: SearchConfig = SearchConfig()):
        self.objective = objective
        self.space = space
        self.config = config
        self.logger = logging.getLogger(__name__)

    def grid_points(self) -> int:
        """Points per dimension so that the full grid stays within budget."""
        points = int(np.floor(self.config.grid_budget ** (1.0 / self.space.dim) + 1e-9))
        return max(2, points)

    def _scan(self) -> Tuple[np.ndarray, float, np.ndarray]:
        points = self.grid_points()
        axes = [np.linspace(lo, hi, points) for lo, hi in zip(self.space.lows, self.space.highs)]
        self.logger.info(f"MAP grid scan: {points} points per dimension over {self.space.dim} "
                         f"dimension(s), {points ** self.space.dim} evaluations")
        best_x, best_value = None, -np.inf
        for candidate in itertools.product(*axes):
            x = np.array(candidate)
            value = self.objective(x)
            if value > best_value:
                best_x, best_value = x, value
        steps = self.space.widths / (points - 1)
        return best_x, best_value, steps

    def _refine(self, x: np.ndarray, value: float, steps: np.ndarray) -> Tuple[np.ndarray, float]:
        lows, highs = self.space.low_array, self.space.high_array
        for round_index in range(self.config.max_rounds):
            start = value
            for d in range(self.space.dim):
                lo = max(lows[d], x[d] - steps[d])
                hi = min(highs[d], x[d] + steps[d])
                if hi <= lo:
                    continue

                def negative(t, d=d):
                    trial = x.copy()
                    trial[d] = t
                    return -self.objective(trial)

                result = minimize_scalar(negative, bounds=(lo, hi), method="bounded",
                                         options={"xatol": 1e-6 * max(hi - lo, 1e-12)})
                if -result.fun > value:
                    x = x.copy()
                    x[d] = result.x
                    value = -result.fun
            if value - start <= self.config.tolerance:
                self.logger.debug(f"Refinement converged after {round_index + 1} round(s)")
                break
            steps = steps / 2.0
        return x, value

    def run(self) -> Tuple[ParamVector, float]:
        """
        Returns:
            Best parameter vector found and its objective value
        """
        x, value, steps = self._scan()
        x, value = self._refine(x, value, steps)
        self.logger.info(f"MAP estimate {self.space.vector(x).as_dict()} (objective {value:.4f})")
        return self.space.vector(x), float(value)


def map_fit(spec: ModelSpec, records: Sequence[ResponseRecord], prior: WorldPrior,
            config: SearchConfig = SearchConfig(),
            settings: ModelSettings = ModelSettings()) -> Tuple[ParamVector, float]:
    """
    Best-fitting parameters of a model and the maximum log likelihood.

    With flat priors the MAP point and the maximum-likelihood point coincide inside the box.
    """
    model = ResponseModel(spec, records, prior, settings)
    return MapOptimizer(lambda x: model.log_likelihood(model.space.vector(x))[0], model.space, config).run()
