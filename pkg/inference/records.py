"""
Participant responses and their speaker-phase grouping.
"""
import hashlib
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple

from errors import ValidationError
from world.grid import LengthGrid, Proposition


class ContestantOrder(Enum):
    LONG_FIRST = "long_first"
    SHORT_FIRST = "short_first"

    @property
    def first_goal(self) -> Proposition:
        return Proposition.LONGER if self is ContestantOrder.LONG_FIRST else Proposition.SHORTER


class SpeakerGroup(Enum):
    STRONGEST = "strongest"
    SECOND_STRONGEST = "second_strongest"
    WEAKER = "weaker"


SPEAKER_GROUPS = (SpeakerGroup.STRONGEST, SpeakerGroup.SECOND_STRONGEST, SpeakerGroup.WEAKER)


@dataclass(frozen=True)
class ResponseRecord:
    participant_id: str
    contestant_order: ContestantOrder
    speaker_choice: float
    evidence_1: float
    response_1: float
    evidence_2: Optional[float] = None
    response_2: Optional[float] = None
    speaker_group: Optional[SpeakerGroup] = None

    @property
    def goal(self) -> Proposition:
        """Goal of the contestant whose stick the participant saw first."""
        return self.contestant_order.first_goal

    @property
    def y(self) -> float:
        return normalize_response(self.response_1)


@dataclass(frozen=True)
class RecordRules:
    """What a valid record looks like for a given experiment design."""
    grid: LengthGrid
    example_set: Tuple[float, ...]
    long_evidence: Tuple[float, ...]
    short_evidence: Tuple[float, ...]


def normalize_response(slider: float) -> float:
    """Map a 0-100 slider reading onto [0, 1]."""
    if slider is None or not 0.0 <= slider <= 100.0:
        raise ValidationError(f"response out of range: {slider}")
    return slider / 100.0


def denormalize_response(y: float) -> float:
    return y * 100.0


def classify_speaker_group(record: ResponseRecord, grid: LengthGrid,
                           example_set: Sequence[float]) -> SpeakerGroup:
    """
    Rank the participant's predicted stick among the example set, from the relevant contestant's side.

    Args:
        record: The participant's record
        grid: Length grid of the experiment
        example_set: Sticks shown in the speaker phase

    Returns:
        STRONGEST, SECOND_STRONGEST or WEAKER
    """
    grid.index_of(record.speaker_choice)
    ranked = sorted(example_set, reverse=record.goal is Proposition.LONGER)
    matches = [i for i, v in enumerate(ranked) if grid.index_of(v) == grid.index_of(record.speaker_choice)]
    if not matches:
        raise ValidationError(f"speaker choice {record.speaker_choice} is not in the example set "
                              f"{sorted(example_set)}")
    rank = matches[0]
    if rank == 0:
        return SpeakerGroup.STRONGEST
    if rank == 1:
        return SpeakerGroup.SECOND_STRONGEST
    return SpeakerGroup.WEAKER


def validate_record(record: ResponseRecord, rules: RecordRules) -> ResponseRecord:
    """
    Check a record against the design and attach its speaker group.

    Raises:
        ValidationError naming the first problem found
    """
    allowed = rules.long_evidence if record.contestant_order is ContestantOrder.LONG_FIRST \
        else rules.short_evidence
    if not rules.grid.contains(record.evidence_1) or \
            not any(math.isclose(v, record.evidence_1) for v in allowed):
        raise ValidationError(f"evidence_1 {record.evidence_1} is not allowed for "
                              f"{record.contestant_order.value} (expected one of {list(allowed)})")
    normalize_response(record.response_1)
    if (record.evidence_2 is None) != (record.response_2 is None):
        raise ValidationError("evidence_2 and response_2 must both be present or both empty")
    if record.evidence_2 is not None:
        rules.grid.index_of(record.evidence_2)
        normalize_response(record.response_2)
    group = classify_speaker_group(record, rules.grid, rules.example_set)
    return replace(record, speaker_group=group)


def data_fingerprint(records: Iterable[ResponseRecord]) -> str:
    """Order-independent digest of the data a fit was run on."""
    rows = sorted(
        f"{r.participant_id}|{r.contestant_order.value}|{r.speaker_choice!r}|{r.evidence_1!r}|{r.response_1!r}"
        for r in records
    )
    digest = hashlib.sha256("\n".join(rows).encode("utf-8"))
    return digest.hexdigest()[:16]
