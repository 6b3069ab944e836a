"""
Listeners (judges) at each level of recursion.

J0 takes the shown stick at face value, J1 inverts a level-1 persuasive speaker
with known bias, the joint listener also infers the bias, and J2 inverts the
level-2 speaker who wants to look unbiased.
"""
import logging

import numpy as np

from errors import EmptySupportError
from rsa.beliefs import DEFAULT_BETA_PRIOR, BeliefState, BetaPrior, JointBelief
from rsa.speaker import (joint_tables, level2_utilities, listener_matrix,
                         persuasive_utilities, speaker_matrix, uniform_speaker)
from world.enumeration import WorldTable, proposition_prior, world_table
from world.grid import Proposition, WorldPrior, require_goal

logger = logging.getLogger(__name__)


def _column(table: WorldTable, posterior: np.ndarray, u: float) -> BeliefState:
    j = table.prior.grid.index_of(u)
    column = posterior[:, j]
    if column.sum() <= 0:
        raise EmptySupportError(f"no world is consistent with a shown stick of {u}")
    return BeliefState(table, column.copy())


def literal_listener(u: float, prior: WorldPrior) -> BeliefState:
    """
    J0: worlds weighted by how many of their sticks equal u.

    Args:
        u: Shown stick length (must be on the grid)
        prior: World prior

    Returns:
        Posterior over worlds
    """
    table = world_table(prior)
    return _column(table, listener_matrix(table, uniform_speaker(table)), u)


def pragmatic_speaker_matrix(prior: WorldPrior, goal: Proposition, beta: float,
                             alpha: float = 1.0) -> np.ndarray:
    return speaker_matrix(world_table(prior), persuasive_utilities(prior, goal), alpha * beta)


def level2_speaker_matrix(prior: WorldPrior, goal: Proposition, beta: float, cost_weight: float,
                          beta_prior: BetaPrior = DEFAULT_BETA_PRIOR, alpha: float = 1.0) -> np.ndarray:
    utilities = level2_utilities(prior, goal, cost_weight, beta_prior, alpha)
    return speaker_matrix(world_table(prior), utilities, alpha * abs(beta))


def pragmatic_listener(u: float, goal: Proposition, beta: float, prior: WorldPrior,
                       alpha: float = 1.0) -> BeliefState:
    """
    J1: invert a persuasive speaker with known goal and bias.

    Args:
        u: Shown stick length
        goal: Proposition the speaker argues for
        beta: Bias the judge attributes to the speaker
        prior: World prior
        alpha: Softmax temperature of the speaker

    Returns:
        Posterior over worlds
    """
    require_goal(goal)
    table = world_table(prior)
    speaker = pragmatic_speaker_matrix(prior, goal, beta, alpha)
    return _column(table, listener_matrix(table, speaker), u)


def joint_listener(u: float, goal: Proposition, beta_prior: BetaPrior, prior: WorldPrior,
                   alpha: float = 1.0) -> JointBelief:
    """
    Judge who infers the world and the speaker's bias together.

    Args:
        u: Shown stick length
        goal: Proposition the speaker argues for
        beta_prior: Discrete prior over the bias
        prior: World prior
        alpha: Softmax temperature of the speaker

    Returns:
        Joint posterior with world and beta marginals
    """
    require_goal(goal)
    table = world_table(prior)
    j = prior.grid.index_of(u)
    joint = joint_tables(prior, goal, beta_prior, alpha)[:, :, j]
    if joint.sum() <= 0:
        raise EmptySupportError(f"no (world, beta) pair is consistent with a shown stick of {u}")
    return JointBelief(table, beta_prior.support_array, joint.copy())


def perceived_bias_cost(u: float, goal: Proposition, beta_prior: BetaPrior, prior: WorldPrior,
                        alpha: float = 1.0) -> float:
    """Posterior expectation of |beta| after seeing u."""
    return joint_listener(u, goal, beta_prior, prior, alpha).expected_abs_beta


def level2_listener(u: float, goal: Proposition, beta: float, cost_weight: float, prior: WorldPrior,
                    beta_prior: BetaPrior = DEFAULT_BETA_PRIOR, alpha: float = 1.0) -> BeliefState:
    """
    J2: invert the level-2 speaker.

    Args:
        u: Shown stick length
        goal: Proposition the speaker argues for
        beta: Bias of the level-2 speaker
        cost_weight: Weight w_c on perceived bias
        prior: World prior
        beta_prior: Prior used by the judge the speaker reasons about
        alpha: Softmax temperature

    Returns:
        Posterior over worlds
    """
    require_goal(goal)
    table = world_table(prior)
    speaker = level2_speaker_matrix(prior, goal, beta, cost_weight, beta_prior, alpha)
    return _column(table, listener_matrix(table, speaker), u)


def _curve(table: WorldTable, speaker: np.ndarray) -> np.ndarray:
    return table.mask(Proposition.LONGER) @ listener_matrix(table, speaker)


def literal_curve(prior: WorldPrior) -> np.ndarray:
    """P_J0(longer | u) for every grid value."""
    table = world_table(prior)
    return _curve(table, uniform_speaker(table))


def pragmatic_curve(prior: WorldPrior, goal: Proposition, beta: float, alpha: float = 1.0) -> np.ndarray:
    """P_J1(longer | u) for every grid value."""
    return _curve(world_table(prior), pragmatic_speaker_matrix(prior, goal, beta, alpha))


def level2_curve(prior: WorldPrior, goal: Proposition, beta: float, cost_weight: float,
                 beta_prior: BetaPrior = DEFAULT_BETA_PRIOR, alpha: float = 1.0) -> np.ndarray:
    """P_J2(longer | u) for every grid value."""
    speaker = level2_speaker_matrix(prior, goal, beta, cost_weight, beta_prior, alpha)
    return _curve(world_table(prior), speaker)


def belief_shift(u: float, goal: Proposition, beta: float, prior: WorldPrior, alpha: float = 1.0) -> float:
    """Prior minus posterior probability of the goal under J1."""
    require_goal(goal)
    before = proposition_prior(prior)[goal]
    after = pragmatic_listener(u, goal, beta, prior, alpha).probability(goal)
    return before - after


def supports_goal(u: float, goal: Proposition, prior: WorldPrior) -> bool:
    """Whether u lies strictly on the goal's side of the midpoint."""
    midpoint = prior.grid.midpoint
    return u > midpoint if goal is Proposition.LONGER else u < midpoint


def effect_size(u: float, goal: Proposition, beta: float, prior: WorldPrior, alpha: float = 1.0) -> float:
    """
    Size of the weak evidence effect: how far favorable evidence lowers belief in the goal.

    Zero when u does not favor the goal or when belief does not drop.
    """
    require_goal(goal)
    if not supports_goal(u, goal, prior):
        logger.debug(f"Stick {u} does not favor {goal.value}; no weak evidence effect defined")
        return 0.0
    return max(0.0, belief_shift(u, goal, beta, prior, alpha))
