from .adjust import (AdjustParams, AdjustVariant, StrengthMap, adjust_sequence, adjust_update,
                     adjust_update_array, evidence_strength)

__all__ = ['AdjustParams', 'AdjustVariant', 'StrengthMap', 'adjust_sequence', 'adjust_update',
           'adjust_update_array', 'evidence_strength']
