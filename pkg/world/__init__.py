from .grid import LengthGrid, StickSet, Proposition, WorldPrior, proposition_truth, require_goal
from .enumeration import WorldTable, enumerate_worlds, proposition_prior, remaining_sum_cdf, world_table

__all__ = ['LengthGrid', 'StickSet', 'Proposition', 'WorldPrior', 'proposition_truth', 'require_goal',
           'WorldTable', 'enumerate_worlds', 'proposition_prior', 'remaining_sum_cdf', 'world_table']
