"""
Participant data files: reading with validation and writing.
"""
import logging
import math
import os
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from datafiles.provenance import Provenance, write_csv
from errors import DataFormatError, ValidationError
from inference.records import ContestantOrder, RecordRules, ResponseRecord, validate_record

logger = logging.getLogger(__name__)

COLUMNS = ["participant_id", "contestant_order", "speaker_choice", "evidence_1", "response_1",
           "evidence_2", "response_2"]


@dataclass
class RejectedRow:
    line: int
    participant_id: str
    reason: str


@dataclass
class ValidationReport:
    accepted: int = 0
    rejected: List[RejectedRow] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.accepted + len(self.rejected)


def _number(text: str, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise ValidationError(f"{column} is not a number: {text!r}")
    if not math.isfinite(value):
        raise ValidationError(f"{column} is not finite: {text!r}")
    return value


def _optional_number(text: str, column: str) -> Optional[float]:
    return None if text.strip() == "" else _number(text, column)


def _parse_row(row: pd.Series) -> ResponseRecord:
    participant = row["participant_id"].strip()
    if not participant:
        raise ValidationError("participant_id is empty")
    try:
        order = ContestantOrder(row["contestant_order"].strip().lower())
    except ValueError:
        raise ValidationError(f"unknown contestant_order {row['contestant_order']!r}")
    return ResponseRecord(
        participant_id=participant,
        contestant_order=order,
        speaker_choice=_number(row["speaker_choice"], "speaker_choice"),
        evidence_1=_number(row["evidence_1"], "evidence_1"),
        response_1=_number(row["response_1"], "response_1"),
        evidence_2=_optional_number(row["evidence_2"], "evidence_2"),
        response_2=_optional_number(row["response_2"], "response_2"),
    )


def ingest(path: str, rules: RecordRules) -> Tuple[List[ResponseRecord], ValidationReport]:
    """
    Read and validate a participant data file.

    Args:
        path: CSV file with the exact participant header (lines starting with '#' are ignored)
        rules: Design the records must match

    Returns:
        (valid records with speaker groups, report of rejected rows)
    """
    if not os.path.isfile(path):
        raise DataFormatError(f"data file not found: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, comment="#", keep_default_na=False, skip_blank_lines=True)
    except pd.errors.EmptyDataError:
        raise DataFormatError(f"{path} has no header")
    frame = frame.fillna("")
    if list(frame.columns) != COLUMNS:
        raise DataFormatError(f"{path} header must be exactly {','.join(COLUMNS)}, "
                              f"got {','.join(map(str, frame.columns))}")

    records, report, seen = [], ValidationReport(), set()
    for offset, (_, row) in enumerate(frame.iterrows()):
        line = offset + 2
        try:
            record = validate_record(_parse_row(row), rules)
            if record.participant_id in seen:
                raise ValidationError(f"duplicate participant_id {record.participant_id}")
        except ValidationError as e:
            report.rejected.append(RejectedRow(line, row["participant_id"], str(e)))
            logger.warning(f"Rejected row {line} ({row['participant_id']}): {e}")
            continue
        seen.add(record.participant_id)
        records.append(record)
    report.accepted = len(records)
    logger.info(f"Ingested {report.accepted} of {report.total} rows from {path}")
    return records, report


def records_to_frame(records: Sequence[ResponseRecord]) -> pd.DataFrame:
    rows = [{
        "participant_id": r.participant_id,
        "contestant_order": r.contestant_order.value,
        "speaker_choice": r.speaker_choice,
        "evidence_1": r.evidence_1,
        "response_1": r.response_1,
        "evidence_2": r.evidence_2,
        "response_2": r.response_2,
    } for r in records]
    return pd.DataFrame(rows, columns=COLUMNS)


def write_records(records: Sequence[ResponseRecord], path: str, provenance: Provenance,
                  float_format: str = "%.12g") -> None:
    write_csv(records_to_frame(records), path, provenance, float_format)
    logger.info(f"Wrote {len(records)} records to {path}")
