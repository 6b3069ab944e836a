from .sweep import Heatmap, SweepConfig, belief_curves, effect_heatmap
from .synthetic import SyntheticConfig, generate_synthetic
from .properties import SuiteReport, default_battery, theorem_suite

__all__ = ['Heatmap', 'SweepConfig', 'belief_curves', 'effect_heatmap', 'SyntheticConfig',
           'generate_synthetic', 'SuiteReport', 'default_battery', 'theorem_suite']
