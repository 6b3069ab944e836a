from .beliefs import BeliefState, BetaPrior, JointBelief, SpeakerParams, DEFAULT_BETA_PRIOR
from .speaker import persuasive_utility, speaker_choice_dist, level2_speaker
from .listeners import (literal_listener, pragmatic_listener, joint_listener, perceived_bias_cost,
                        level2_listener, effect_size, belief_shift, literal_curve, pragmatic_curve,
                        level2_curve)
from .sequential import sequential_update

__all__ = ['BeliefState', 'BetaPrior', 'JointBelief', 'SpeakerParams', 'DEFAULT_BETA_PRIOR',
           'persuasive_utility', 'speaker_choice_dist', 'level2_speaker',
           'literal_listener', 'pragmatic_listener', 'joint_listener', 'perceived_bias_cost',
           'level2_listener', 'effect_size', 'belief_shift', 'literal_curve', 'pragmatic_curve',
           'level2_curve', 'sequential_update']
