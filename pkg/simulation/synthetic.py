"""
Synthetic participants drawn from the speaker-dependent mixture model.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from config import RunConfig
from errors import ValidationError
from inference.models import Component, ModelSettings, ParamVector, predict_response
from inference.records import (SPEAKER_GROUPS, ContestantOrder, RecordRules, ResponseRecord, SpeakerGroup,
                               validate_record)
from rsa.beliefs import SpeakerParams
from rsa.sequential import sequential_update
from world.grid import LengthGrid, Proposition, WorldPrior

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyntheticConfig:
    prior: WorldPrior
    example_set: Tuple[float, ...]
    long_evidence: Tuple[float, ...]
    short_evidence: Tuple[float, ...]
    n_participants: int = 723
    group_proportions: Tuple[float, float, float] = (0.67, 0.2, 0.13)
    beta: float = 2.26
    offset: float = -0.11
    p_z: Tuple[float, float, float] = (0.99, 0.1, 0.1)
    long_first_share: float = 0.5
    weak_cell_weight: float = 0.4
    response_sd: float = 0.3
    alpha: float = 1.0
    second_pick: str = "independent"
    seed: int = 0

    def __post_init__(self):
        if self.n_participants < 0:
            raise ValidationError("n_participants must be non-negative")
        if len(self.group_proportions) != 3 or len(self.p_z) != 3:
            raise ValidationError("group proportions and p_z need one entry per speaker group")
        if any(p < 0 for p in self.group_proportions) or abs(sum(self.group_proportions) - 1.0) > 1e-9:
            raise ValidationError("group proportions must be non-negative and sum to 1")
        if any(not 0.0 <= p <= 1.0 for p in self.p_z):
            raise ValidationError("p_z entries must be probabilities")
        if not 0.0 <= self.long_first_share <= 1.0 or not 0.0 < self.weak_cell_weight < 1.0:
            raise ValidationError("long_first_share must lie in [0, 1] and weak_cell_weight in (0, 1)")
        if len(self.example_set) < 3:
            raise ValidationError("the example set needs at least three sticks")
        for u in self.example_set + self.long_evidence + self.short_evidence:
            self.prior.grid.index_of(u)

    @classmethod
    def from_config(cls, config: RunConfig, seed: Optional[int] = None) -> "SyntheticConfig":
        values, midpoint = config.grid_spec()
        syn = config.synthetic
        return cls(
            prior=WorldPrior.from_values(values, midpoint, config.world.n, config.world.enumeration_cap),
            example_set=tuple(config.world.example_set),
            long_evidence=tuple(config.world.long_evidence),
            short_evidence=tuple(config.world.short_evidence),
            n_participants=syn.n_participants,
            group_proportions=tuple(syn.group_proportions),
            beta=syn.beta,
            offset=syn.offset,
            p_z=tuple(syn.p_z),
            long_first_share=syn.long_first_share,
            weak_cell_weight=syn.weak_cell_weight,
            response_sd=config.model.response_sd,
            alpha=config.model.alpha,
            second_pick=config.model.second_pick,
            seed=syn.seed if seed is None else seed,
        )

    @property
    def rules(self) -> RecordRules:
        return RecordRules(self.prior.grid, self.example_set, self.long_evidence, self.short_evidence)


def condition_weights(evidence: Tuple[float, ...], grid: LengthGrid, weak_weight: float) -> np.ndarray:
    """
    Sampling weights over an evidence set, oversampling the stick closest to the midpoint.

    Args:
        evidence: Allowed evidence values for one contestant
        grid: Grid supplying the midpoint
        weak_weight: Probability mass given to the weak cell

    Returns:
        Weights summing to 1
    """
    if len(evidence) == 1:
        return np.ones(1)
    distances = [abs(u - grid.midpoint) for u in evidence]
    weak = int(np.argmin(distances))
    weights = np.full(len(evidence), (1.0 - weak_weight) / (len(evidence) - 1))
    weights[weak] = weak_weight
    return weights


def speaker_choice_for(group: SpeakerGroup, goal: Proposition, example_set: Tuple[float, ...],
                       rng: np.random.Generator) -> float:
    """A stick from the example set whose rank for the goal matches the speaker group."""
    ranked = sorted(example_set, reverse=goal is Proposition.LONGER)
    if group is SpeakerGroup.STRONGEST:
        return ranked[0]
    if group is SpeakerGroup.SECOND_STRONGEST:
        return ranked[1]
    return ranked[2 + int(rng.integers(len(ranked) - 2))]


class SyntheticGenerator:
    """Draws participants one at a time; each participant has its own seeded generator."""

    def __init__(self, cfg: SyntheticConfig):
        self.cfg = cfg
        self.logger = logging.getLogger(__name__)
        self.settings = ModelSettings(alpha=cfg.alpha, response_sd=cfg.response_sd)
        self.params = ParamVector(("beta",), (cfg.beta,))
        self._means: Dict[tuple, float] = {}
        self._second: Dict[tuple, float] = {}

    def _mean(self, component: Component, record: ResponseRecord) -> float:
        key = (component, record.goal, record.evidence_1)
        if key not in self._means:
            self._means[key] = predict_response(component, self.params, record, self.cfg.prior, self.settings)
        return self._means[key]

    def _second_mean(self, component: Component, record: ResponseRecord, evidence_2: float) -> float:
        key = (component, record.goal, record.evidence_1, evidence_2)
        if key not in self._second:
            kind = "literal" if component is Component.J0 else "pragmatic"
            observations = [(record.evidence_1, record.goal), (evidence_2, record.goal.opposite)]
            states = sequential_update(observations, kind, SpeakerParams(alpha=self.cfg.alpha, beta=self.cfg.beta),
                                       self.cfg.prior, second_pick=self.cfg.second_pick)
            self._second[key] = states[-1].p_longer
        return self._second[key]

    def _response(self, mean: float, rng: np.random.Generator) -> float:
        """Slider reading 100 * y, recorded at the slider's 0.1 resolution."""
        y = float(np.clip(mean + self.cfg.offset + self.cfg.response_sd * rng.standard_normal(), 0.0, 1.0))
        return round(100.0 * y, 1)

    def participant(self, index: int) -> ResponseRecord:
        cfg = self.cfg
        rng = np.random.default_rng([cfg.seed, index])
        group = SPEAKER_GROUPS[int(rng.choice(len(SPEAKER_GROUPS), p=cfg.group_proportions))]
        order = ContestantOrder.LONG_FIRST if rng.uniform() < cfg.long_first_share else ContestantOrder.SHORT_FIRST
        first, second = (cfg.long_evidence, cfg.short_evidence) if order is ContestantOrder.LONG_FIRST \
            else (cfg.short_evidence, cfg.long_evidence)
        evidence_1 = first[int(rng.choice(len(first), p=condition_weights(first, cfg.prior.grid,
                                                                          cfg.weak_cell_weight)))]
        evidence_2 = second[int(rng.integers(len(second)))]
        choice = speaker_choice_for(group, order.first_goal, cfg.example_set, rng)
        component = Component.J1 if rng.uniform() < cfg.p_z[SPEAKER_GROUPS.index(group)] else Component.J0

        record = ResponseRecord(participant_id=f"P{index + 1:04d}", contestant_order=order,
                                speaker_choice=choice, evidence_1=evidence_1, response_1=0.0)
        response_1 = self._response(self._mean(component, record), rng)
        response_2 = self._response(self._second_mean(component, record, evidence_2), rng)
        record = ResponseRecord(participant_id=record.participant_id, contestant_order=order,
                                speaker_choice=choice, evidence_1=evidence_1, response_1=response_1,
                                evidence_2=evidence_2, response_2=response_2)
        return validate_record(record, cfg.rules)

    def run(self) -> List[ResponseRecord]:
        records = [self.participant(i) for i in range(self.cfg.n_participants)]
        self.logger.info(f"Generated {len(records)} synthetic participants (seed {self.cfg.seed})")
        return records


def generate_synthetic(cfg: SyntheticConfig) -> List[ResponseRecord]:
    """
    Draw a synthetic dataset.

    Each participant gets a speaker group, a contestant order and an evidence condition;
    a J1 judge is drawn with the group's p_z (J0 otherwise) and the slider reading is
    the judge's belief plus offset and Gaussian noise, clamped to [0, 100] and rounded to
    0.1 so that written files read back exactly.

    Args:
        cfg: Synthetic dataset configuration

    Returns:
        Validated records, speaker groups attached
    """
    return SyntheticGenerator(cfg).run()
