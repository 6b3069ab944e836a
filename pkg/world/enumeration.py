"""
Exact enumeration of stick multisets and the sum distributions behind them.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, Tuple

import numpy as np

from errors import EnumerationTooLargeError, ValidationError
from world.grid import TIE_TOLERANCE, LengthGrid, Proposition, StickSet, WorldPrior, compare_to_midpoint

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WorldTable:
    """
    Every distinct multiset of a WorldPrior, as arrays.

    Attributes:
        prior: The prior that was enumerated
        counts: (worlds, grid) multiplicity of each grid value in each world
        probs: (worlds,) prior probability of each world
        truth: (worlds,) Proposition of each world
    """
    prior: WorldPrior
    counts: np.ndarray
    probs: np.ndarray
    truth: Tuple[Proposition, ...]

    @property
    def values(self) -> np.ndarray:
        return np.asarray(self.prior.grid.values)

    @property
    def n_worlds(self) -> int:
        return self.counts.shape[0]

    def mask(self, proposition: Proposition) -> np.ndarray:
        return np.array([t is proposition for t in self.truth], dtype=float)

    def stick_set(self, index: int) -> StickSet:
        lengths = []
        for value, count in zip(self.prior.grid.values, self.counts[index]):
            lengths.extend([value] * int(count))
        return StickSet(tuple(lengths))


def check_enumeration_size(prior: WorldPrior) -> int:
    required = prior.grid.size ** prior.n
    if required > prior.enumeration_cap:
        raise EnumerationTooLargeError(required, prior.enumeration_cap)
    return required


@lru_cache(maxsize=64)
def world_table(prior: WorldPrior) -> WorldTable:
    """
    Enumerate multisets with multinomial weights.

    Args:
        prior: The i.i.d. uniform prior over sticks

    Returns:
        WorldTable with one row per distinct multiset
    """
    tuples = check_enumeration_size(prior)
    grid = prior.grid
    size, n = grid.size, prior.n
    n_factorial = math.factorial(n)

    counts = []
    probs = []
    truth = []
    for combo in itertools.combinations_with_replacement(range(size), n):
        row = np.bincount(np.asarray(combo), minlength=size)
        multiplicity = n_factorial
        for c in row:
            multiplicity //= math.factorial(int(c))
        counts.append(row)
        probs.append(multiplicity / tuples)
        total = math.fsum(grid.values[i] for i in combo)
        truth.append(compare_to_midpoint(total, n, grid.midpoint))

    table = WorldTable(prior, np.array(counts, dtype=float), np.array(probs), tuple(truth))
    logger.debug(f"Enumerated {table.n_worlds} multisets for grid of {size} and n={n}")
    return table


def enumerate_worlds(prior: WorldPrior) -> Iterator[Tuple[StickSet, float]]:
    """Yield each distinct multiset once with its prior probability."""
    table = world_table(prior)
    for i in range(table.n_worlds):
        yield table.stick_set(i), float(table.probs[i])


def proposition_prior(prior: WorldPrior) -> Dict[Proposition, float]:
    """
    Prior probability of LONGER, SHORTER and TIE.

    Args:
        prior: The world prior

    Returns:
        Mapping from proposition to probability
    """
    table = world_table(prior)
    return {p: float(table.mask(p) @ table.probs)
            for p in (Proposition.LONGER, Proposition.SHORTER, Proposition.TIE)}


def sum_distribution(grid: LengthGrid, k: int) -> Dict[float, float]:
    """Distribution of the sum of k i.i.d. uniform grid draws."""
    if k < 0:
        raise ValidationError("k must be non-negative")
    weight = 1.0 / grid.size
    dist = {0.0: 1.0}
    for _ in range(k):
        step: Dict[float, float] = {}
        for total, p in dist.items():
            for v in grid.values:
                key = round(total + v, 9)
                step[key] = step.get(key, 0.0) + p * weight
        dist = step
    return dist


def remaining_sum_cdf(prior: WorldPrior, k: int, x: float) -> float:
    """
    Probability that the sum of k grid draws is strictly below x.

    Args:
        prior: The world prior supplying the grid
        k: Number of draws
        x: Threshold on the sum

    Returns:
        P(sum < x)
    """
    dist = sum_distribution(prior.grid, k)
    below = [p for total, p in sorted(dist.items())
             if total < x and not math.isclose(total, x, rel_tol=TIE_TOLERANCE, abs_tol=1e-12)]
    return float(math.fsum(below))
