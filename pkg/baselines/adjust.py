"""
Asocial belief-adjustment models: anchor-and-adjust (AA) and minimum acceptable strength (MAS).
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence

import numpy as np
from scipy.special import expit

from errors import ValidationError


class AdjustVariant(Enum):
    AA = "aa"
    MAS = "mas"


@dataclass(frozen=True)
class StrengthMap:
    """Centered logistic map from stick length to evidence strength in (-0.5, 0.5)."""
    growth_rate: float
    center: float = 5.0

    def __post_init__(self):
        if self.growth_rate < 0:
            raise ValidationError("growth rate B must be non-negative")


@dataclass(frozen=True)
class AdjustParams:
    reference: float = 0.0
    initial_belief: float = 0.5
    variant: AdjustVariant = AdjustVariant.AA

    def __post_init__(self):
        if self.variant is AdjustVariant.AA and self.reference != 0.0:
            raise ValidationError("the AA variant fixes the reference point at R=0")
        if not -1.0 <= self.reference <= 1.0:
            raise ValidationError("reference point R must lie in [-1, 1]")
        if not 0.0 <= self.initial_belief <= 1.0:
            raise ValidationError("initial belief must be a probability")


def evidence_strength(u, strength_map: StrengthMap):
    """
    strength(u) = 1 / (1 + exp(-B (u - center))) - 0.5

    Accepts scalars or arrays.
    """
    value = expit(strength_map.growth_rate * (np.asarray(u, dtype=float) - strength_map.center)) - 0.5
    return float(value) if np.ndim(value) == 0 else value


def adjust_update(previous: float, strength: float, params: AdjustParams) -> float:
    """
    One adding-variant update: C_k = C_{k-1} + w_k (s - R).

    The weight is C_{k-1} when s <= R and 1 - C_{k-1} otherwise; the result is clamped to [0, 1].
    """
    if not 0.0 <= previous <= 1.0:
        raise ValidationError(f"belief {previous} is not a probability")
    if not -1.0 <= strength <= 1.0:
        raise ValidationError(f"strength {strength} lies outside [-1, 1]")
    if strength == params.reference:
        return previous
    weight = previous if strength <= params.reference else 1.0 - previous
    return float(np.clip(previous + weight * (strength - params.reference), 0.0, 1.0))


def adjust_update_array(previous: np.ndarray, strength: np.ndarray, reference: float) -> np.ndarray:
    """Vectorized adjust_update for fitting."""
    weight = np.where(strength <= reference, previous, 1.0 - previous)
    return np.clip(previous + weight * (strength - reference), 0.0, 1.0)


def adjust_sequence(observations: Sequence[float], strength_map: StrengthMap,
                    params: AdjustParams) -> List[float]:
    """
    Fold adjust_update over the observations, holding the reference point fixed.

    Returns:
        Beliefs [C_0, C_1, ..., C_k]
    """
    beliefs = [params.initial_belief]
    for u in observations:
        beliefs.append(adjust_update(beliefs[-1], evidence_strength(u, strength_map), params))
    return beliefs
