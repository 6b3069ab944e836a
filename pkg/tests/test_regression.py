"""
Regression values for the simulation outputs, pinned to a brute force over ordered stick tuples.

The oracle never builds multisets: every ordered tuple of grid values is equally likely and the
speaker picks one of the n slots, so multiplicities and the multinomial prior come out of the
enumeration itself.
"""
import numpy as np
import pandas as pd
import pytest
from scipy.special import softmax

from config import GRID_PRESETS, SWEEP_BETAS
from main import main
from rsa.beliefs import DEFAULT_BETA_PRIOR, SpeakerParams
from rsa.listeners import joint_listener, level2_listener
from rsa.sequential import sequential_update
from rsa.speaker import level2_speaker
from simulation.sweep import SweepConfig, belief_curves, effect_heatmap
from world.grid import Proposition, StickSet, WorldPrior

LONGER, SHORTER = Proposition.LONGER, Proposition.SHORTER
EXAMPLE_HAND = (2.0, 4.0, 7.0, 8.0, 9.0)


class VectorTupleOracle:
    def __init__(self, values, midpoint, n=5):
        self.values = np.asarray(values, dtype=float)
        size = self.values.size
        self.slots = np.indices((size,) * n).reshape(n, -1).T
        self.onehot = self.slots[:, :, None] == np.arange(size)[None, None, :]
        sums = self.values[self.slots].sum(axis=1)
        self.masks = {LONGER: sums > n * midpoint, SHORTER: sums < n * midpoint}
        self._utilities = {}
        self._joint = {}

    def index(self, u):
        return int(np.flatnonzero(self.values == u)[0])

    def show(self, utilities, weight):
        """(tuples, grid) P(show u | tuple) for a softmax over slots."""
        per_slot = utilities[self.slots]
        if weight == 0:
            scores = np.zeros(per_slot.shape)
        else:
            blocked = ~np.isfinite(per_slot)
            preferred = ~blocked if weight > 0 else blocked
            keep = np.where(preferred.any(axis=1, keepdims=True), preferred, True)
            scores = np.where(keep, weight * np.where(blocked, 0.0, per_slot), -np.inf)
        return np.einsum("tk,tku->tu", softmax(scores, axis=1), self.onehot)

    def goal_curve(self, show, goal=LONGER):
        return (self.masks[goal] @ show) / show.sum(axis=0)

    def literal(self):
        return self.goal_curve(self.show(np.zeros(self.values.size), 0.0))

    def utilities(self, goal):
        if goal not in self._utilities:
            with np.errstate(divide="ignore"):
                self._utilities[goal] = np.log(self.goal_curve(self.show(np.zeros(self.values.size), 0.0), goal))
        return self._utilities[goal]

    def pragmatic(self, goal, beta):
        return self.goal_curve(self.show(self.utilities(goal), beta))

    def prior(self, goal=LONGER):
        return float(self.masks[goal].mean())

    def joint(self, goal, beta_prior):
        """Per grid value: P(goal | u), P(longer | u) and E[|beta| | u] under the joint listener."""
        key = (goal, beta_prior)
        if key in self._joint:
            return self._joint[key]
        size = self.values.size
        mass, on_goal, longer, abs_beta = (np.zeros(size) for _ in range(4))
        for beta, weight in zip(beta_prior.support, beta_prior.weights):
            show = weight * self.show(self.utilities(goal), beta)
            total = show.sum(axis=0)
            mass += total
            on_goal += self.masks[goal] @ show
            longer += self.masks[LONGER] @ show
            abs_beta += abs(beta) * total
        self._joint[key] = (on_goal / mass, longer / mass, abs_beta / mass)
        return self._joint[key]

    def level2_utilities(self, goal, cost_weight, beta_prior):
        on_goal, _, cost = self.joint(goal, beta_prior)
        return np.log(on_goal) - cost_weight * cost

    def level2(self, goal, beta, cost_weight, beta_prior):
        return self.goal_curve(self.show(self.level2_utilities(goal, cost_weight, beta_prior), abs(beta)))

    def hand_choice(self, hand, utilities, weight):
        per_slot = np.array([utilities[self.index(v)] for v in hand])
        probs = softmax(weight * per_slot)
        return {v: float(sum(p for h, p in zip(hand, probs) if h == v)) for v in sorted(set(hand))}


@pytest.fixture(scope="module")
def experiment_oracle():
    values, midpoint = GRID_PRESETS["experiment"]
    return VectorTupleOracle(values, midpoint)


@pytest.fixture(scope="module")
def extended_oracle():
    values, midpoint = GRID_PRESETS["extended"]
    return VectorTupleOracle(values, midpoint)


def oracle_heatmap(oracle, betas, evidence):
    prior = oracle.prior(LONGER)
    shifts = np.array([[prior - oracle.pragmatic(LONGER, b)[oracle.index(u)] for u in evidence] for b in betas])
    on_side = np.array([u > 5.0 for u in evidence])
    return shifts, np.where(on_side[None, :], np.maximum(shifts, 0.0), 0.0)


class TestHeatmap:
    EVIDENCE = (5.0, 6.0, 7.0, 8.0, 9.0, 10.0)

    def test_every_cell(self, extended_oracle):
        values, midpoint = GRID_PRESETS["extended"]
        heatmap = effect_heatmap(SweepConfig(WorldPrior.from_values(values, midpoint, 5)))
        shifts, effects = oracle_heatmap(extended_oracle, SWEEP_BETAS, self.EVIDENCE)
        np.testing.assert_allclose(heatmap.shifts, shifts, rtol=0, atol=1e-12)
        np.testing.assert_allclose(heatmap.effects, effects, rtol=0, atol=1e-12)

    @pytest.mark.parametrize("signed", [False, True])
    def test_written_table(self, tmp_path, extended_oracle, signed):
        out = tmp_path / "heatmap.csv"
        config = tmp_path / "run.toml"
        config.write_text("", encoding="utf-8")
        argv = ["simulate", "heatmap", "--config", str(config), "--out", str(out)]
        assert main(argv + (["--signed"] if signed else [])) == 0
        table = pd.read_csv(out, comment="#")
        shifts, effects = oracle_heatmap(extended_oracle, SWEEP_BETAS, self.EVIDENCE)
        assert table["beta"].tolist() == list(SWEEP_BETAS)
        np.testing.assert_allclose(table.iloc[:, 1:].to_numpy(), shifts if signed else effects,
                                   rtol=1e-11, atol=1e-13)


class TestCurves:
    def test_default_curves(self, experiment_oracle):
        curves = belief_curves()
        np.testing.assert_allclose(curves["literal"], experiment_oracle.literal() - 0.13, rtol=0, atol=1e-12)
        np.testing.assert_allclose(curves["pragmatic"], experiment_oracle.pragmatic(LONGER, 2.03) - 0.13,
                                   rtol=0, atol=1e-12)
        assert curves["prior"].iloc[0] == pytest.approx(experiment_oracle.prior(), abs=1e-12)

    def test_written_table(self, tmp_path, experiment_oracle):
        out = tmp_path / "curves.csv"
        assert main(["simulate", "curves", "--out", str(out)]) == 0
        table = pd.read_csv(out, comment="#")
        assert table["evidence"].tolist() == list(GRID_PRESETS["experiment"][0])
        np.testing.assert_allclose(table["pragmatic"], experiment_oracle.pragmatic(LONGER, 2.03) - 0.13,
                                   rtol=1e-11, atol=1e-13)


class TestJointAndLevelTwo:
    def test_posterior_bias_after_the_strongest_stick(self, experiment_prior, experiment_oracle):
        belief = joint_listener(9, LONGER, DEFAULT_BETA_PRIOR, experiment_prior)
        _, longer, cost = experiment_oracle.joint(LONGER, DEFAULT_BETA_PRIOR)
        i = experiment_oracle.index(9.0)
        assert belief.mean_beta == pytest.approx(cost[i], abs=1e-10)
        assert belief.worlds.p_longer == pytest.approx(longer[i], abs=1e-12)

    def test_level2_belief_after_an_eight(self, experiment_prior, experiment_oracle):
        got = level2_listener(8, LONGER, 2.0, 1.0, experiment_prior).p_longer
        expected = experiment_oracle.level2(LONGER, 2.0, 1.0, DEFAULT_BETA_PRIOR)[experiment_oracle.index(8.0)]
        assert got == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("cost_weight", [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0, 2.0, 5.0])
    def test_example_hand_choice(self, experiment_prior, experiment_oracle, cost_weight):
        params = SpeakerParams(beta=2.0, cost_weight=cost_weight, level=2)
        dist = level2_speaker(StickSet(EXAMPLE_HAND), LONGER, params, experiment_prior)
        utilities = experiment_oracle.level2_utilities(LONGER, cost_weight, DEFAULT_BETA_PRIOR)
        expected = experiment_oracle.hand_choice(EXAMPLE_HAND, utilities, 2.0)
        assert dist == pytest.approx(expected, abs=1e-12)
        assert max(dist, key=dist.get) == max(expected, key=expected.get)

    def test_free_speaker_shows_the_strongest_stick(self, experiment_prior):
        dist = level2_speaker(StickSet(EXAMPLE_HAND), LONGER, SpeakerParams(beta=2.0, level=2), experiment_prior)
        assert max(dist, key=dist.get) == 9.0


class TestSequentialTrajectory:
    def test_six_then_four(self, experiment_prior, experiment_oracle):
        states = sequential_update([(6.0, LONGER), (4.0, SHORTER)], "pragmatic", SpeakerParams(beta=2.0),
                                   experiment_prior)
        first = experiment_oracle.show(experiment_oracle.utilities(LONGER), 2.0)[:, experiment_oracle.index(6.0)]
        second = experiment_oracle.show(experiment_oracle.utilities(SHORTER), 2.0)[:, experiment_oracle.index(4.0)]
        longer = experiment_oracle.masks[LONGER]
        expected = [longer @ first / first.sum(), longer @ (first * second) / (first * second).sum()]
        assert [s.p_longer for s in states] == pytest.approx(expected, abs=1e-12)
