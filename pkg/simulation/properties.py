"""
Property checks of the speaker and listener models over a battery of grids.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

import numpy as np

from config import CURVE_BETA, GRID_PRESETS, SWEEP_BETAS
from rsa.beliefs import SpeakerParams
from rsa.listeners import (effect_size, level2_curve, literal_curve, literal_listener, pragmatic_curve,
                           pragmatic_listener)
from rsa.speaker import persuasive_utility, speaker_choice_dist
from world.enumeration import enumerate_worlds, sum_distribution
from world.grid import Proposition, WorldPrior

logger = logging.getLogger(__name__)

UtilityFn = Callable[[float, Proposition, WorldPrior], float]

GOALS = (Proposition.LONGER, Proposition.SHORTER)
REDUCTION_TOLERANCE = 1e-12
NORMALIZATION_TOLERANCE = 1e-10
# worlds sampled per grid for the per-world checks
WORLD_SAMPLE = 40


@dataclass(frozen=True)
class NamedGrid:
    name: str
    prior: WorldPrior


def default_battery() -> List[NamedGrid]:
    battery = [NamedGrid(name, WorldPrior.from_values(values, midpoint, 5))
               for name, (values, midpoint) in GRID_PRESETS.items()]
    battery.append(NamedGrid("1..5", WorldPrior.from_values((1, 2, 3, 4, 5), 3, 5)))
    battery.append(NamedGrid("1..3,n=2", WorldPrior.from_values((1, 2, 3), 2, 2)))
    return battery


@dataclass
class PropertyResult:
    name: str
    grid: str
    passed: bool
    counterexample: str = ""


@dataclass
class SuiteReport:
    results: List[PropertyResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> List[PropertyResult]:
        return [r for r in self.results if not r.passed]

    def lines(self) -> List[str]:
        out = []
        for r in self.results:
            status = "ok" if r.passed else "FAIL"
            line = f"{status:4} {r.name} [{r.grid}]"
            if r.counterexample:
                line += f": {r.counterexample}"
            out.append(line)
        return out


def goal_tail_probability(u: float, goal: Proposition, prior: WorldPrior) -> float:
    """P(goal | one stick is u) from the distribution of the remaining n - 1 sticks."""
    threshold = prior.n * prior.grid.midpoint - u
    dist = sum_distribution(prior.grid, prior.n - 1)
    if goal is Proposition.LONGER:
        mass = [p for total, p in dist.items() if total > threshold and not math.isclose(total, threshold)]
    else:
        mass = [p for total, p in dist.items() if total < threshold and not math.isclose(total, threshold)]
    return math.fsum(mass)


def check_reduction(prior: WorldPrior) -> Tuple[bool, str]:
    literal = literal_curve(prior)
    for goal in GOALS:
        gaps = {
            "J1": np.abs(pragmatic_curve(prior, goal, 0.0) - literal),
            "J2": np.abs(level2_curve(prior, goal, 0.0, 1.0) - literal),
        }
        for level, gap in gaps.items():
            worst = int(np.argmax(gap))
            if gap[worst] >= REDUCTION_TOLERANCE:
                return False, (f"{level} at beta=0, goal={goal.value}, u={prior.grid.values[worst]:g}: "
                               f"differs from J0 by {gap[worst]:.3g}")
    return True, ""


def check_monotonicity(prior: WorldPrior, utility_fn: UtilityFn) -> Tuple[bool, str]:
    """
    Utility non-decreasing toward the goal's side, strict wherever the remaining-sum tail differs.
    """
    values = prior.grid.values
    for goal in GOALS:
        ordered = values if goal is Proposition.LONGER else tuple(reversed(values))
        for weaker, stronger in zip(ordered, ordered[1:]):
            low, high = utility_fn(weaker, goal, prior), utility_fn(stronger, goal, prior)
            strict = goal_tail_probability(stronger, goal, prior) > goal_tail_probability(weaker, goal, prior)
            if high < low or (strict and not high > low):
                return False, (f"goal={goal.value}: utility({stronger:g})={high:.6g} "
                               f"vs utility({weaker:g})={low:.6g}")
    return True, ""


def check_utility_closed_form(prior: WorldPrior, utility_fn: UtilityFn) -> Tuple[bool, str]:
    for goal in GOALS:
        for u in prior.grid.values:
            expected = goal_tail_probability(u, goal, prior)
            got = math.exp(utility_fn(u, goal, prior))
            if not math.isclose(got, expected, rel_tol=1e-9, abs_tol=1e-12):
                return False, f"goal={goal.value}, u={u:g}: exp(utility)={got:.12g}, remaining-sum tail={expected:.12g}"
    return True, ""


def _sample_worlds(prior: WorldPrior) -> list:
    worlds = [w for w, _ in enumerate_worlds(prior)]
    if len(worlds) <= WORLD_SAMPLE:
        return worlds
    picks = np.linspace(0, len(worlds) - 1, WORLD_SAMPLE).round().astype(int)
    return [worlds[i] for i in picks]


def check_argmax_invariance(prior: WorldPrior, scales: Sequence[float] = (0.5, 2.0, 10.0)) -> Tuple[bool, str]:
    """Only the product alpha * beta matters to the speaker."""
    for w in _sample_worlds(prior):
        for goal in GOALS:
            base = speaker_choice_dist(w, goal, SpeakerParams(alpha=1.0, beta=2.0), prior)
            for c in scales:
                scaled = speaker_choice_dist(w, goal, SpeakerParams(alpha=1.0 / c, beta=2.0 * c), prior)
                for u, p in base.items():
                    if not math.isclose(p, scaled[u], rel_tol=1e-9, abs_tol=1e-12):
                        return False, (f"w={w.lengths}, goal={goal.value}, c={c:g}: P({u:g}) "
                                       f"{p:.12g} vs {scaled[u]:.12g}")
    return True, ""


def check_normalization(prior: WorldPrior) -> Tuple[bool, str]:
    for w in _sample_worlds(prior):
        for goal in GOALS:
            for beta in (0.0, 2.0, 100.0):
                total = sum(speaker_choice_dist(w, goal, SpeakerParams(beta=beta), prior).values())
                if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
                    return False, f"speaker w={w.lengths}, goal={goal.value}, beta={beta:g} sums to {total:.15g}"
    for u in prior.grid.values:
        states = [("J0", literal_listener(u, prior))]
        states += [(f"J1 {goal.value}", pragmatic_listener(u, goal, 2.0, prior)) for goal in GOALS]
        for label, state in states:
            total = float(state.posterior.sum())
            parts = state.p_longer + state.p_shorter + state.p_tie
            if abs(total - 1.0) > NORMALIZATION_TOLERANCE or abs(parts - 1.0) > NORMALIZATION_TOLERANCE:
                return False, f"{label} posterior at u={u:g} sums to {total:.15g}"
    return True, ""


def check_effect_region(prior: WorldPrior, betas: Sequence[float] = SWEEP_BETAS) -> Tuple[bool, str]:
    """The set of u with a weak evidence effect never shrinks as beta grows."""
    previous, previous_beta = set(), None
    for beta in sorted(betas):
        region = {u for u in prior.grid.values if effect_size(u, Proposition.LONGER, beta, prior) > 0}
        lost = previous - region
        if lost:
            return False, (f"effect at u={sorted(lost)} present for beta={previous_beta:g} "
                           f"but gone at beta={beta:g}")
        previous, previous_beta = region, beta
    return True, ""


def check_curve_shape(prior: WorldPrior, beta: float = CURVE_BETA) -> Tuple[bool, str]:
    """The pragmatic curve bends more sharply than the literal one."""
    if prior.grid.size < 3:
        return True, ""
    literal = np.max(np.abs(np.diff(literal_curve(prior), n=2)))
    pragmatic = np.max(np.abs(np.diff(pragmatic_curve(prior, Proposition.LONGER, beta), n=2)))
    if not pragmatic > literal:
        return False, f"max |second difference| J1={pragmatic:.6g} vs J0={literal:.6g} at beta={beta:g}"
    return True, ""


def theorem_suite(utility_fn: UtilityFn = persuasive_utility,
                  battery: Sequence[NamedGrid] = None) -> SuiteReport:
    """
    Run every model property over a battery of grids.

    Args:
        utility_fn: Persuasive utility under test (swap in a broken one to see failures)
        battery: Grids to check; defaults to the presets plus two small grids

    Returns:
        SuiteReport with one result per (property, grid)
    """
    battery = default_battery() if battery is None else battery
    report = SuiteReport()
    for entry in battery:
        prior = entry.prior
        checks = [
            ("reduction", lambda: check_reduction(prior)),
            ("monotonicity", lambda: check_monotonicity(prior, utility_fn)),
            ("utility closed form", lambda: check_utility_closed_form(prior, utility_fn)),
            ("argmax invariance", lambda: check_argmax_invariance(prior)),
            ("normalization", lambda: check_normalization(prior)),
            ("effect region", lambda: check_effect_region(prior)),
        ]
        if entry.name == "experiment":
            checks.append(("curve shape", lambda: check_curve_shape(prior)))
        for name, check in checks:
            passed, detail = check()
            report.results.append(PropertyResult(name, entry.name, passed, detail))
            if not passed:
                logger.warning(f"Property {name} failed on {entry.name}: {detail}")
    logger.info(f"Checked {len(report.results)} properties, {len(report.failures)} failure(s)")
    return report
