"""
Value types passed between speakers and listeners.
"""
from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from errors import ValidationError
from world.enumeration import WorldTable
from world.grid import Proposition, StickSet


@dataclass(frozen=True)
class SpeakerParams:
    alpha: float = 1.0
    beta: float = 0.0
    cost_weight: float = 0.0
    level: int = 1

    def __post_init__(self):
        if self.alpha < 0:
            raise ValidationError("alpha must be non-negative")
        if self.cost_weight < 0:
            raise ValidationError("cost_weight must be non-negative")
        if self.level not in (1, 2):
            raise ValidationError("level must be 1 or 2")
        if not np.isfinite(self.beta):
            raise ValidationError("beta must be finite")


@dataclass(frozen=True)
class BetaPrior:
    """Discrete prior over the speaker's bias."""
    support: Tuple[float, ...]
    weights: Tuple[float, ...]

    def __post_init__(self):
        if len(self.support) == 0 or len(self.support) != len(self.weights):
            raise ValidationError("beta prior needs matching, non-empty support and weights")
        if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValidationError("beta prior weights must be non-negative and sum to 1")

    @classmethod
    def uniform(cls, low: float = 0.0, high: float = 10.0, points: int = 101) -> "BetaPrior":
        support = tuple(float(b) for b in np.linspace(low, high, points))
        return cls(support, tuple([1.0 / points] * points))

    @classmethod
    def point_mass(cls, beta: float) -> "BetaPrior":
        return cls((float(beta),), (1.0,))

    @property
    def support_array(self) -> np.ndarray:
        return np.asarray(self.support, dtype=float)

    @property
    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


DEFAULT_BETA_PRIOR = BetaPrior.uniform()


@dataclass(frozen=True, eq=False)
class BeliefState:
    """A posterior over the enumerated worlds."""
    table: WorldTable
    posterior: np.ndarray

    def probability(self, proposition: Proposition) -> float:
        return float(self.table.mask(proposition) @ self.posterior)

    @property
    def p_longer(self) -> float:
        return self.probability(Proposition.LONGER)

    @property
    def p_shorter(self) -> float:
        return self.probability(Proposition.SHORTER)

    @property
    def p_tie(self) -> float:
        return self.probability(Proposition.TIE)

    @property
    def world_posterior(self) -> Dict[StickSet, float]:
        return {self.table.stick_set(i): float(p)
                for i, p in enumerate(self.posterior) if p > 0}


@dataclass(frozen=True, eq=False)
class JointBelief:
    """Posterior over (world, beta) after one piece of evidence."""
    table: WorldTable
    beta_support: np.ndarray
    joint: np.ndarray  # (betas, worlds)

    @property
    def worlds(self) -> BeliefState:
        return BeliefState(self.table, self.joint.sum(axis=0))

    @property
    def beta_posterior(self) -> np.ndarray:
        return self.joint.sum(axis=1)

    @property
    def mean_beta(self) -> float:
        return float(self.beta_posterior @ self.beta_support)

    @property
    def expected_abs_beta(self) -> float:
        return float(self.beta_posterior @ np.abs(self.beta_support))
