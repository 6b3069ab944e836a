"""
Belief trajectories over the two reveals of a contest.
"""
import logging
from typing import List, Sequence, Tuple

import numpy as np

from errors import EmptySupportError, ValidationError
from rsa.beliefs import DEFAULT_BETA_PRIOR, BeliefState, BetaPrior, SpeakerParams
from rsa.speaker import level2_utilities, persuasive_utilities, speaker_matrix
from world.enumeration import world_table
from world.grid import Proposition, WorldPrior, require_goal

logger = logging.getLogger(__name__)

LISTENER_KINDS = ("literal", "pragmatic", "level2")
SECOND_PICKS = ("independent", "exclusive")


def _utilities(kind: str, prior: WorldPrior, goal: Proposition, params: SpeakerParams,
               beta_prior: BetaPrior) -> Tuple[np.ndarray, float]:
    if kind == "literal":
        return np.zeros(prior.grid.size), 0.0
    if kind == "pragmatic":
        return persuasive_utilities(prior, goal), params.alpha * params.beta
    return (level2_utilities(prior, goal, params.cost_weight, beta_prior, params.alpha),
            params.alpha * abs(params.beta))


def sequential_update(observations: Sequence[Tuple[float, Proposition]], kind: str,
                      params: SpeakerParams, prior: WorldPrior, second_pick: str = "independent",
                      beta_prior: BetaPrior = DEFAULT_BETA_PRIOR) -> List[BeliefState]:
    """
    Posterior after each reveal, multiplying the per-reveal speaker likelihoods.

    Args:
        observations: Up to two (stick, goal of the contestant who showed it) pairs
        kind: 'literal', 'pragmatic' or 'level2'
        params: Speaker parameters shared by both contestants
        prior: World prior
        second_pick: 'independent' lets the second contestant show any of the n sticks,
            'exclusive' removes the stick already shown
        beta_prior: Prior of the inner judge for the level-2 speaker

    Returns:
        One BeliefState per observation
    """
    if kind not in LISTENER_KINDS:
        raise ValidationError(f"listener kind must be one of {LISTENER_KINDS}")
    if second_pick not in SECOND_PICKS:
        raise ValidationError(f"second_pick must be one of {SECOND_PICKS}")
    if not 1 <= len(observations) <= 2:
        raise ValidationError("a contest has one or two reveals")

    table = world_table(prior)
    counts = table.counts.copy()
    weights = table.probs.copy()
    states = []
    for step, (u, goal) in enumerate(observations):
        require_goal(goal)
        j = prior.grid.index_of(u)
        utilities, weight = _utilities(kind, prior, goal, params, beta_prior)
        speaker = speaker_matrix(table, utilities, weight, counts=counts)
        weights = weights * speaker[:, j]
        total = weights.sum()
        if total <= 0:
            shown = [o[0] for o in observations[:step + 1]]
            raise EmptySupportError(f"no world contains all of the shown sticks {shown}")
        states.append(BeliefState(table, weights / total))

        if second_pick == "exclusive":
            counts = counts.copy()
            counts[:, j] = np.maximum(counts[:, j] - 1, 0)
    logger.debug(f"Sequential {kind} update over {len(observations)} reveal(s)")
    return states
