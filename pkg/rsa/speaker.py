"""
Speaker models: persuasive utility and the softmax choice over shown sticks.
"""
import logging
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from errors import EmptySupportError, ValidationError
from rsa.beliefs import DEFAULT_BETA_PRIOR, BetaPrior, SpeakerParams
from world.enumeration import WorldTable, world_table
from world.grid import Proposition, StickSet, WorldPrior, require_goal

logger = logging.getLogger(__name__)


def uniform_speaker(table: WorldTable) -> np.ndarray:
    """Each of the n slots equally likely to be shown."""
    return table.counts / table.counts.sum(axis=1, keepdims=True)


def speaker_matrix(table: WorldTable, utilities: np.ndarray, weight: float,
                   counts: Optional[np.ndarray] = None) -> np.ndarray:
    """
    Softmax speaker over the sticks actually present in each world.

    A stick with utility -inf gets no mass when weight > 0 and takes all of it
    when weight < 0. A world whose sticks all share that status falls back to
    the slot counts.

    Args:
        table: Enumerated worlds
        utilities: (grid,) utility of showing each grid value
        weight: Multiplier on the utilities (alpha * beta)
        counts: Optional (worlds, grid) slot counts replacing table.counts

    Returns:
        (worlds, grid) matrix whose rows are P(u | w)
    """
    counts = table.counts if counts is None else counts
    if weight == 0:
        totals = counts.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(totals > 0, counts / totals, 0.0)

    present = counts > 0
    impossible = present & ~np.isfinite(utilities)[None, :]
    preferred = present & ~impossible if weight > 0 else impossible
    keep = np.where(preferred.any(axis=1, keepdims=True), preferred, present)

    finite = np.where(np.isfinite(utilities), utilities, 0.0)
    with np.errstate(divide="ignore"):
        scores = np.where(keep, np.log(np.where(keep, counts, 1.0)) + weight * finite[None, :], -np.inf)
    with np.errstate(invalid="ignore", divide="ignore"):
        norm = logsumexp(scores, axis=1, keepdims=True)
        return np.where(np.isfinite(norm), np.exp(scores - norm), 0.0)


def listener_matrix(table: WorldTable, speaker: np.ndarray) -> np.ndarray:
    """Column u holds P(w | u) proportional to P(w) * P_S(u | w); zero columns stay zero."""
    joint = table.probs[:, None] * speaker
    mass = joint.sum(axis=0, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(mass > 0, joint / mass, 0.0)


@lru_cache(maxsize=64)
def literal_goal_probs(prior: WorldPrior, goal: Proposition) -> np.ndarray:
    """P_L0(goal | u) for every grid value u."""
    table = world_table(prior)
    posterior = listener_matrix(table, uniform_speaker(table))
    probs = table.mask(goal) @ posterior
    probs.setflags(write=False)
    return probs


def persuasive_utility(u: float, goal: Proposition, prior: WorldPrior) -> float:
    """
    ln P_L0(goal | u), negative infinity when the goal is impossible.

    Args:
        u: Shown stick length
        goal: Proposition the speaker argues for
        prior: World prior

    Returns:
        The persuasive utility of showing u
    """
    require_goal(goal)
    p = literal_goal_probs(prior, goal)[prior.grid.index_of(u)]
    if p <= 0:
        return float("-inf")
    return float(np.log(p))


def persuasive_utilities(prior: WorldPrior, goal: Proposition) -> np.ndarray:
    probs = literal_goal_probs(prior, goal)
    with np.errstate(divide="ignore"):
        return np.log(probs)


@lru_cache(maxsize=16)
def joint_tables(prior: WorldPrior, goal: Proposition, beta_prior: BetaPrior,
                 alpha: float = 1.0) -> np.ndarray:
    """
    P_L1(w, beta | u) for every grid value u.

    Returns:
        (betas, worlds, grid) array normalized over (betas, worlds) for each u
    """
    table = world_table(prior)
    utilities = persuasive_utilities(prior, goal)
    layers = []
    for beta, weight in zip(beta_prior.support, beta_prior.weights):
        speaker = speaker_matrix(table, utilities, alpha * beta)
        layers.append(weight * table.probs[:, None] * speaker)
    joint = np.stack(layers)
    mass = joint.sum(axis=(0, 1), keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        joint = np.where(mass > 0, joint / mass, 0.0)
    joint.setflags(write=False)
    return joint


@lru_cache(maxsize=16)
def level2_inputs(prior: WorldPrior, goal: Proposition, beta_prior: BetaPrior,
                  alpha: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Per grid value: P_L1(goal | u) under the joint listener and the perceived-bias cost C(u).
    """
    table = world_table(prior)
    joint = joint_tables(prior, goal, beta_prior, alpha)
    goal_probs = np.einsum("w,bwu->u", table.mask(goal), joint)
    cost = np.einsum("b,bwu->u", np.abs(beta_prior.support_array), joint)
    return goal_probs, cost


def level2_utilities(prior: WorldPrior, goal: Proposition, cost_weight: float,
                     beta_prior: BetaPrior = DEFAULT_BETA_PRIOR, alpha: float = 1.0) -> np.ndarray:
    """ln P_L1(goal | u) - w_c * C(u) for every grid value."""
    goal_probs, cost = level2_inputs(prior, goal, beta_prior, alpha)
    with np.errstate(divide="ignore"):
        return np.log(goal_probs) - cost_weight * cost


def _choice_over_sticks(w: StickSet, prior: WorldPrior, utilities: np.ndarray,
                        weight: float) -> Dict[float, float]:
    w.validate(prior.grid)
    grid = prior.grid
    present = sorted({grid.index_of(v) for v in w.lengths})
    if weight != 0 and all(not np.isfinite(utilities[i]) for i in present):
        raise EmptySupportError(f"every stick in {w.lengths} has zero persuasive utility")

    counts = np.zeros((1, grid.size))
    for i in present:
        counts[0, i] = w.multiplicity(grid.values[i])
    row = speaker_matrix(world_table(prior), utilities, weight, counts=counts)[0]
    return {grid.values[i]: float(row[i]) for i in present}


def speaker_choice_dist(w: StickSet, goal: Proposition, params: SpeakerParams,
                        prior: WorldPrior) -> Dict[float, float]:
    """
    Level-1 speaker: P(u) proportional to multiplicity(u) * exp(alpha * beta * ln P_L0(goal | u)).

    Args:
        w: The sticks the speaker holds
        goal: Proposition the speaker argues for
        params: Speaker parameters (level must be 1)
        prior: World prior

    Returns:
        Mapping from stick length to probability of showing it
    """
    require_goal(goal)
    if params.level != 1:
        raise ValidationError("speaker_choice_dist is the level-1 speaker; use level2_speaker")
    return _choice_over_sticks(w, prior, persuasive_utilities(prior, goal), params.alpha * params.beta)


def level2_speaker(w: StickSet, goal: Proposition, params: SpeakerParams, prior: WorldPrior,
                   beta_prior: BetaPrior = DEFAULT_BETA_PRIOR) -> Dict[float, float]:
    """
    Speaker who expects the judge to infer its bias and pays w_c per unit of perceived bias.

    Args:
        w: The sticks the speaker holds
        goal: Proposition the speaker argues for
        params: Speaker parameters (level must be 2)
        prior: World prior
        beta_prior: Prior the inner judge places on the bias

    Returns:
        Mapping from stick length to probability of showing it
    """
    require_goal(goal)
    if params.level != 2:
        raise ValidationError("level2_speaker needs params with level=2")
    utilities = level2_utilities(prior, goal, params.cost_weight, beta_prior, params.alpha)
    return _choice_over_sticks(w, prior, utilities, params.alpha * abs(params.beta))
