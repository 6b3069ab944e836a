"""
The Stick Contest sample space: allowed lengths, stick sets and propositions.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

from errors import ValidationError

# Relative tolerance used when comparing sums against the midpoint
TIE_TOLERANCE = 1e-9


class Proposition(Enum):
    LONGER = "longer"
    SHORTER = "shorter"
    TIE = "tie"

    @classmethod
    def parse(cls, text: str) -> "Proposition":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValidationError(f"unknown proposition {text!r}")

    @property
    def opposite(self) -> "Proposition":
        if self is Proposition.TIE:
            return self
        return Proposition.SHORTER if self is Proposition.LONGER else Proposition.LONGER


def require_goal(goal: Proposition) -> Proposition:
    """Speaker goals are binary; TIE is not a goal."""
    if goal not in (Proposition.LONGER, Proposition.SHORTER):
        raise ValidationError(f"goal must be LONGER or SHORTER, got {goal}")
    return goal


@dataclass(frozen=True)
class LengthGrid:
    values: Tuple[float, ...]
    midpoint: float

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "midpoint", float(self.midpoint))
        if not values:
            raise ValidationError("grid needs at least one length")
        if any(v <= 0 for v in values):
            raise ValidationError("grid lengths must be positive")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValidationError("grid lengths must be strictly increasing")
        if not math.isfinite(self.midpoint):
            raise ValidationError("grid midpoint must be finite")

    @property
    def size(self) -> int:
        return len(self.values)

    def index_of(self, length: float) -> int:
        """Position of a length in the grid, matched with float tolerance."""
        for i, v in enumerate(self.values):
            if math.isclose(v, length, rel_tol=TIE_TOLERANCE, abs_tol=1e-12):
                return i
        raise ValidationError(f"length {length} is not on the grid {list(self.values)}")

    def contains(self, length: float) -> bool:
        try:
            self.index_of(length)
        except ValidationError:
            return False
        return True

    def is_symmetric(self) -> bool:
        mirrored = sorted(2 * self.midpoint - v for v in self.values)
        return all(math.isclose(a, b, rel_tol=TIE_TOLERANCE, abs_tol=1e-12)
                   for a, b in zip(mirrored, self.values))


@dataclass(frozen=True)
class StickSet:
    lengths: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(sorted(float(v) for v in self.lengths)))
        if not self.lengths:
            raise ValidationError("a stick set needs at least one stick")

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def mean(self) -> float:
        return math.fsum(self.lengths) / self.n

    def multiplicity(self, length: float) -> int:
        return sum(1 for v in self.lengths
                   if math.isclose(v, length, rel_tol=TIE_TOLERANCE, abs_tol=1e-12))

    def validate(self, grid: LengthGrid) -> None:
        for v in self.lengths:
            grid.index_of(v)


@dataclass(frozen=True)
class WorldPrior:
    """N sticks drawn i.i.d. and uniformly from the grid."""
    grid: LengthGrid
    n: int
    enumeration_cap: int = 10_000_000

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError("stick count must be positive")

    @classmethod
    def from_values(cls, values: Iterable[float], midpoint: float, n: int,
                    enumeration_cap: int = 10_000_000) -> "WorldPrior":
        return cls(LengthGrid(tuple(values), midpoint), n, enumeration_cap)


def compare_to_midpoint(total: float, n: int, midpoint: float) -> Proposition:
    """Classify a stick-length sum against n times the midpoint."""
    threshold = n * midpoint
    if math.isclose(total, threshold, rel_tol=TIE_TOLERANCE, abs_tol=1e-12):
        return Proposition.TIE
    return Proposition.LONGER if total > threshold else Proposition.SHORTER


def proposition_truth(w: StickSet, grid: LengthGrid) -> Proposition:
    """
    Whether the mean stick length is above, below or at the midpoint.

    Args:
        w: The stick set
        grid: Grid the sticks were drawn from

    Returns:
        LONGER, SHORTER or TIE
    """
    w.validate(grid)
    return compare_to_midpoint(math.fsum(w.lengths), w.n, grid.midpoint)
