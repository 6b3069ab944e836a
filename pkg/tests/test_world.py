import itertools
import math
from fractions import Fraction

import pytest

from errors import EnumerationTooLargeError, ValidationError
from world.enumeration import enumerate_worlds, proposition_prior, remaining_sum_cdf, world_table
from world.grid import LengthGrid, Proposition, StickSet, WorldPrior, proposition_truth


def tuple_count(values, k, predicate):
    return sum(1 for t in itertools.product(values, repeat=k) if predicate(sum(t)))


class TestLengthGrid:
    def test_rejects_unsorted_values(self):
        with pytest.raises(ValidationError):
            LengthGrid((1, 3, 2), 2)

    def test_rejects_non_positive_values(self):
        with pytest.raises(ValidationError):
            LengthGrid((0, 1, 2), 1)

    def test_midpoint_outside_range_is_allowed(self):
        assert LengthGrid((6, 7), 5).midpoint == 5.0

    def test_index_of_off_grid_value(self):
        with pytest.raises(ValidationError):
            LengthGrid((1, 2, 3), 2).index_of(2.5)

    def test_symmetry(self):
        assert LengthGrid(tuple(range(1, 10)), 5).is_symmetric()
        assert not LengthGrid(tuple(range(1, 11)), 5).is_symmetric()


class TestEnumeration:
    def test_single_draw(self):
        worlds = list(enumerate_worlds(WorldPrior.from_values(range(1, 10), 5, 1)))
        assert len(worlds) == 9
        assert all(p == pytest.approx(1 / 9, abs=1e-15) for _, p in worlds)

    def test_two_fair_draws(self):
        worlds = {w.lengths: p for w, p in enumerate_worlds(WorldPrior.from_values((1, 2), 1.5, 2))}
        assert worlds == pytest.approx({(1.0, 1.0): 0.25, (1.0, 2.0): 0.5, (2.0, 2.0): 0.25})

    def test_experiment_grid_has_1287_multisets(self, experiment_prior):
        worlds = list(enumerate_worlds(experiment_prior))
        assert len(worlds) == math.comb(13, 5) == 1287
        assert math.fsum(p for _, p in worlds) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("values,n", [((1, 2, 3), 3), ((1, 2, 3, 4, 5), 4), ((0.1, 0.5, 0.9), 4)])
    def test_matches_ordered_tuples(self, values, n):
        prior = WorldPrior.from_values(values, 2, n)
        worlds = {w.lengths: p for w, p in enumerate_worlds(prior)}
        counts = {}
        for t in itertools.product(prior.grid.values, repeat=n):
            key = tuple(sorted(t))
            counts[key] = counts.get(key, 0) + 1
        total = len(values) ** n
        assert set(worlds) == set(counts)
        for key, count in counts.items():
            assert worlds[key] == pytest.approx(count / total, abs=1e-15)

    def test_cap_names_required_size(self):
        prior = WorldPrior.from_values(range(1, 10), 5, 5, enumeration_cap=1000)
        with pytest.raises(EnumerationTooLargeError) as info:
            world_table(prior)
        assert info.value.required == 9 ** 5
        assert "59049" in str(info.value)


class TestPropositions:
    def test_truth(self):
        grid = LengthGrid(tuple(range(1, 10)), 5)
        assert proposition_truth(StickSet((2, 4, 7, 8, 9)), grid) is Proposition.LONGER
        assert proposition_truth(StickSet((5, 5, 5, 5, 5)), grid) is Proposition.TIE
        assert proposition_truth(StickSet((1, 1, 1, 1, 9)), grid) is Proposition.SHORTER

    def test_truth_rejects_off_grid_stick(self):
        with pytest.raises(ValidationError):
            proposition_truth(StickSet((2, 4, 7, 8, 10)), LengthGrid(tuple(range(1, 10)), 5))

    def test_symmetric_prior(self, experiment_prior):
        probs = proposition_prior(experiment_prior)
        assert probs[Proposition.LONGER] == pytest.approx(probs[Proposition.SHORTER], abs=1e-14)
        assert sum(probs.values()) == pytest.approx(1.0, abs=1e-12)

    def test_tie_probability_matches_tuple_count(self, experiment_prior):
        ties = tuple_count(range(1, 10), 5, lambda s: s == 25)
        assert proposition_prior(experiment_prior)[Proposition.TIE] == pytest.approx(ties / 9 ** 5, abs=1e-14)

    def test_all_sticks_above_midpoint(self):
        probs = proposition_prior(WorldPrior.from_values((6, 7), 5, 5))
        assert probs[Proposition.LONGER] == pytest.approx(1.0)


class TestRemainingSumCdf:
    def test_empty_sum(self, experiment_prior):
        assert remaining_sum_cdf(experiment_prior, 0, 3) == 1.0

    def test_single_draw(self, experiment_prior):
        assert remaining_sum_cdf(experiment_prior, 1, 5) == pytest.approx(4 / 9)

    def test_four_draws_against_tuples(self, experiment_prior):
        expected = Fraction(tuple_count(range(1, 10), 4, lambda s: s < 20), 9 ** 4)
        assert remaining_sum_cdf(experiment_prior, 4, 20) == pytest.approx(float(expected), abs=1e-14)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_non_decreasing_and_matches_tuples(self, experiment_prior, k):
        previous = 0.0
        for x in range(0, 9 * k + 3):
            value = remaining_sum_cdf(experiment_prior, k, x)
            assert value >= previous
            expected = tuple_count(range(1, 10), k, lambda s: s < x) / 9 ** k
            assert value == pytest.approx(expected, abs=1e-14)
            previous = value
