from .records import (ContestantOrder, RecordRules, ResponseRecord, SpeakerGroup, classify_speaker_group,
                      data_fingerprint, normalize_response, validate_record)
from .models import (Component, Family, ModelSettings, ModelSpec, ParamVector, ResponseModel, Variant,
                     log_likelihood, parameter_space, predict_response)
from .optimizer import SearchConfig, map_fit
from .sampler import MCMCConfig, mh_sample
from .criteria import Criterion, PsisResult, psis_loo, waic
from .comparison import FitResult, compare_models, fit_model
from .posterior import posterior_predictive, summarize_posterior

__all__ = ['ContestantOrder', 'RecordRules', 'ResponseRecord', 'SpeakerGroup', 'classify_speaker_group',
           'data_fingerprint', 'normalize_response', 'validate_record',
           'Component', 'Family', 'ModelSettings', 'ModelSpec', 'ParamVector', 'ResponseModel', 'Variant',
           'log_likelihood', 'parameter_space', 'predict_response',
           'SearchConfig', 'map_fit', 'MCMCConfig', 'mh_sample',
           'Criterion', 'PsisResult', 'psis_loo', 'waic',
           'FitResult', 'compare_models', 'fit_model', 'posterior_predictive', 'summarize_posterior']
