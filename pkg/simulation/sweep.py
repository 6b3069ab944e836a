"""
Effect-size sweeps over speaker bias and evidence, and the listener belief curves.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from config import CURVE_BETA, CURVE_OFFSET, GRID_PRESETS, SWEEP_BETAS, RunConfig
from errors import ValidationError
from rsa.listeners import belief_shift, literal_curve, pragmatic_curve, supports_goal
from world.enumeration import proposition_prior
from world.grid import Proposition, WorldPrior, require_goal

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepConfig:
    prior: WorldPrior
    goal: Proposition = Proposition.LONGER
    beta_values: Tuple[float, ...] = SWEEP_BETAS
    evidence_values: Tuple[float, ...] = (5.0, 6.0, 7.0, 8.0, 9.0, 10.0)
    alpha: float = 1.0

    def __post_init__(self):
        require_goal(self.goal)
        if not self.beta_values or not self.evidence_values:
            raise ValidationError("sweep needs at least one beta and one evidence value")
        for u in self.evidence_values:
            if not self.prior.grid.contains(u):
                raise ValidationError(f"evidence value {u} is not on the sweep grid "
                                      f"{list(self.prior.grid.values)}")

    @classmethod
    def from_config(cls, config: RunConfig) -> "SweepConfig":
        values, midpoint = GRID_PRESETS[config.sweep.preset]
        prior = WorldPrior.from_values(values, midpoint, config.world.n, config.world.enumeration_cap)
        return cls(prior=prior,
                   goal=Proposition.parse(config.sweep.goal),
                   beta_values=tuple(config.sweep.beta_values),
                   evidence_values=tuple(config.sweep.evidence_values),
                   alpha=config.model.alpha)


@dataclass
class Heatmap:
    beta_values: Tuple[float, ...]
    evidence_values: Tuple[float, ...]
    effects: np.ndarray  # (betas, evidence)
    goal: Proposition
    shifts: Optional[np.ndarray] = None  # signed prior minus posterior, same shape

    @property
    def no_effect(self) -> np.ndarray:
        """Cells where no weak evidence effect is predicted."""
        return self.effects <= 0

    def effect_region(self, row: int) -> List[float]:
        return [u for u, e in zip(self.evidence_values, self.effects[row]) if e > 0]

    def to_frame(self, signed: bool = False) -> pd.DataFrame:
        """
        One row per beta, one column per evidence value.

        Args:
            signed: Write the signed belief shifts instead of the effect sizes
        """
        if signed and self.shifts is None:
            raise ValidationError("this heatmap carries no signed shifts")
        values = self.shifts if signed else self.effects
        columns = [f"u={u:g}" for u in self.evidence_values]
        frame = pd.DataFrame(values, columns=columns)
        frame.insert(0, "beta", list(self.beta_values))
        return frame


def effect_heatmap(cfg: SweepConfig) -> Heatmap:
    """
    Weak evidence effect for every (beta, u) cell.

    Args:
        cfg: Sweep configuration

    Returns:
        Heatmap with one row per beta and one column per evidence value; shifts holds the
        unclamped prior-minus-posterior values
    """
    shape = (len(cfg.beta_values), len(cfg.evidence_values))
    effects = np.zeros(shape)
    shifts = np.zeros(shape)
    for i, beta in enumerate(cfg.beta_values):
        for j, u in enumerate(cfg.evidence_values):
            shifts[i, j] = belief_shift(u, cfg.goal, beta, cfg.prior, cfg.alpha)
            if supports_goal(u, cfg.goal, cfg.prior):
                effects[i, j] = max(0.0, shifts[i, j])
        logger.debug(f"beta={beta:g}: effect region {[u for u, e in zip(cfg.evidence_values, effects[i]) if e > 0]}")
    logger.info(f"Computed {effects.size} heatmap cells, {int(np.sum(effects > 0))} with a weak evidence effect")
    return Heatmap(tuple(cfg.beta_values), tuple(cfg.evidence_values), effects, cfg.goal, shifts)


def belief_curves(beta: float = CURVE_BETA, offset: float = CURVE_OFFSET, prior: WorldPrior = None,
                  goal: Proposition = Proposition.LONGER, alpha: float = 1.0) -> pd.DataFrame:
    """
    Predicted responses of the literal and pragmatic judges across the grid.

    Args:
        beta: Bias the pragmatic judge attributes to the speaker
        offset: Response offset added to both curves
        prior: World prior (defaults to the experiment grid with five sticks)
        goal: Goal of the speaker whose stick is shown
        alpha: Speaker temperature

    Returns:
        DataFrame with columns evidence, literal, pragmatic, prior; values are not clamped
    """
    require_goal(goal)
    if prior is None:
        values, midpoint = GRID_PRESETS["experiment"]
        prior = WorldPrior.from_values(values, midpoint, 5)
    literal = literal_curve(prior) + offset
    pragmatic = pragmatic_curve(prior, goal, beta, alpha) + offset
    baseline = proposition_prior(prior)[Proposition.LONGER]
    return pd.DataFrame({
        "evidence": list(prior.grid.values),
        "literal": literal,
        "pragmatic": pragmatic,
        "prior": np.full(prior.grid.size, baseline),
    })
