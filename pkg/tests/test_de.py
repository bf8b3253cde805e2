import numpy as np
import pytest

from saxopt.de import (
    Candidate,
    DEConfig,
    FitnessFunction,
    crossover,
    donor,
    evolve,
    init_population,
    repair_increasing,
    select,
    _distinct_indices,
)


class Sphere(FitnessFunction):
    def __init__(self, dimension=5):
        self.dimension = dimension

    def evaluate(self, genome):
        return float(np.sum(genome * genome))


class BoundsRecorder(Sphere):
    """Asserts every evaluated genome respects the given bounds."""

    def __init__(self, dimension, lo, hi):
        super().__init__(dimension)
        self.lo, self.hi = lo, hi

    def evaluate(self, genome):
        assert np.all(genome >= self.lo - 1e-12)
        assert np.all(genome <= self.hi + 1e-12)
        return super().evaluate(genome)


def sphere_config(**overrides):
    defaults = dict(
        popsize=12, f=0.9, cr=0.5, generations=50, seed=0, bounds=((-5.0, 5.0),) * 5
    )
    defaults.update(overrides)
    return DEConfig(**defaults)


class TestConfigValidation:
    @pytest.mark.parametrize(
        "bad",
        [
            dict(popsize=3),
            dict(f=0.0),
            dict(f=2.5),
            dict(cr=-0.1),
            dict(cr=1.1),
            dict(generations=0),
            dict(bounds=()),
            dict(bounds=((1.0, -1.0),)),
        ],
    )
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            sphere_config(**bad)


class TestDonor:
    def test_equal_r2_r3_gives_r1(self):
        r1 = np.array([1.0, -2.0])
        r = np.array([0.5, 0.5])
        assert np.array_equal(donor(r1, r, r, 0.9), r1)

    def test_zero_factor_gives_r1(self):
        r1, r2, r3 = np.array([1.0]), np.array([9.0]), np.array([-9.0])
        assert np.array_equal(donor(r1, r2, r3, 0.0), r1)

    def test_hand_arithmetic(self):
        got = donor(np.zeros(2), np.array([1.0, 2.0]), np.array([0.0, 1.0]), 0.9)
        np.testing.assert_allclose(got, [0.9, 0.9], atol=1e-15)


class TestCrossover:
    def test_cr_one_takes_whole_donor(self):
        rng = np.random.default_rng(0)
        target, donor_vec = np.zeros(8), np.ones(8)
        assert np.array_equal(crossover(target, donor_vec, 1.0, rng), donor_vec)

    def test_cr_zero_forces_exactly_one_gene(self):
        rng = np.random.default_rng(0)
        target, donor_vec = np.zeros(8), np.ones(8)
        for _ in range(100):
            trial = crossover(target, donor_vec, 0.0, rng)
            assert int(np.count_nonzero(trial != target)) == 1

    def test_donor_gene_fraction_statistics(self):
        # each non-forced gene is donor with prob cr; the forced gene always is
        rng = np.random.default_rng(123)
        nbp, cr, trials = 10, 0.5, 10000
        target, donor_vec = np.zeros(nbp), np.ones(nbp)
        taken = sum(
            np.count_nonzero(crossover(target, donor_vec, cr, rng))
            for _ in range(trials)
        )
        fraction = taken / (trials * nbp)
        assert abs(fraction - (cr + (1 - cr) / nbp)) < 0.02

    def test_always_at_least_one_donor_gene(self):
        rng = np.random.default_rng(7)
        target, donor_vec = np.zeros(12), np.ones(12)
        for _ in range(500):
            assert np.count_nonzero(crossover(target, donor_vec, 0.3, rng)) >= 1


class TestSelect:
    def test_strictly_better_trial_survives(self):
        t = Candidate(np.zeros(1), 0.2)
        r = Candidate(np.ones(1), 0.1)
        assert select(t, r) is r

    def test_better_target_survives(self):
        t = Candidate(np.zeros(1), 0.1)
        r = Candidate(np.ones(1), 0.2)
        assert select(t, r) is t

    def test_tie_goes_to_trial(self):
        t = Candidate(np.zeros(1), 0.5)
        r = Candidate(np.ones(1), 0.5)
        assert select(t, r) is r


class TestInitPopulation:
    def test_deterministic_for_seed(self):
        cfg = sphere_config()
        a = init_population(cfg, Sphere())
        b = init_population(cfg, Sphere())
        for x, y in zip(a, b):
            assert np.array_equal(x.genome, y.genome)
            assert x.fitness == y.fitness

    def test_degenerate_bounds_pin_genes(self):
        cfg = sphere_config(bounds=((0.0, 0.0),) * 5)
        for cand in init_population(cfg, Sphere()):
            assert np.array_equal(cand.genome, np.zeros(5))

    def test_shape_and_bounds(self):
        cfg = sphere_config(bounds=((-1.0, 2.0),) * 4)
        pop = init_population(cfg, Sphere(4))
        assert len(pop) == 12
        for cand in pop:
            assert cand.genome.shape == (4,)
            assert np.all(cand.genome >= -1.0) and np.all(cand.genome <= 2.0)

    def test_seed_genomes_injected(self):
        cfg = sphere_config()
        pop = init_population(cfg, Sphere(), seed_genomes=[np.full(5, 0.25)])
        assert np.array_equal(pop[0].genome, np.full(5, 0.25))


class TestEvolve:
    def test_sphere_converges(self):
        result = evolve(sphere_config(generations=200, seed=5), Sphere())
        assert result.best.fitness < 1e-3

    def test_history_length_and_monotone(self):
        result = evolve(sphere_config(generations=1), Sphere())
        assert len(result.history) == 1
        result = evolve(sphere_config(generations=40), Sphere())
        assert len(result.history) == 40
        assert all(a >= b for a, b in zip(result.history, result.history[1:]))

    def test_bit_identical_reruns(self):
        cfg = sphere_config(generations=30, seed=9)
        a, b = evolve(cfg, Sphere()), evolve(cfg, Sphere())
        assert np.array_equal(a.best.genome, b.best.genome)
        assert a.history == b.history

    def test_evaluation_counters(self):
        cfg = sphere_config(generations=25)
        result = evolve(cfg, Sphere())
        assert result.evaluations == 25 * cfg.popsize
        assert result.init_evaluations == cfg.popsize

    def test_bounds_hold_for_every_evaluation(self):
        cfg = sphere_config(generations=30, bounds=((-0.5, 1.5),) * 5)
        evolve(cfg, BoundsRecorder(5, -0.5, 1.5))

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValueError):
            evolve(sphere_config(), Sphere(3))


class TestDistinctIndices:
    def test_always_distinct_and_exclude_target(self):
        rng = np.random.default_rng(4)
        for _ in range(2000):
            target = int(rng.integers(4))
            r1, r2, r3 = _distinct_indices(rng, 4, target)
            assert len({r1, r2, r3, target}) == 4


class TestRepairIncreasing:
    def test_sorts_and_separates(self):
        out = repair_increasing(np.array([2.0, -1.0, 2.0]), -3.0, 3.0)
        assert np.all(np.diff(out) > 0)
        assert out[0] == -1.0 and abs(out[1] - 2.0) < 1e-9

    def test_duplicates_at_upper_bound(self):
        out = repair_increasing(np.full(5, 3.0), -3.0, 3.0)
        assert np.all(np.diff(out) > 0)
        assert np.all(out <= 3.0) and np.all(out >= -3.0)

    def test_out_of_bounds_clipped(self):
        out = repair_increasing(np.array([-10.0, 10.0]), -3.0, 3.0)
        assert out[0] >= -3.0 and out[-1] <= 3.0
        assert out[1] > out[0]

    def test_preserves_valid_input(self):
        v = np.array([-1.0, 0.0, 1.0])
        assert np.array_equal(repair_increasing(v, -3.0, 3.0), v)
