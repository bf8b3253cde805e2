"""Differential evolution, rand/1/bin variant.

Mutation builds a donor as ``r1 + F * (r2 - r3)`` from three population
members distinct from each other and from the target; binomial crossover
forces at least one donor gene; greedy selection keeps the trial on ties.

Reproducibility: one seeded NumPy generator (PCG64, via
``numpy.random.default_rng``) drives initialization, parent index draws, the
forced-gene index, and the crossover uniforms, in that order, so a run is
bit-identical for a fixed seed and config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class DEConfig:
    """Control parameters and per-gene search bounds."""

    popsize: int
    f: float
    cr: float
    generations: int
    seed: int
    bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.popsize < 4:
            raise ValueError("population size must be at least 4")
        if not 0 < self.f <= 2:
            raise ValueError("mutation factor must be in (0, 2]")
        if not 0 <= self.cr <= 1:
            raise ValueError("crossover constant must be in [0, 1]")
        if self.generations < 1:
            raise ValueError("need at least one generation")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if not bounds:
            raise ValueError("bounds must cover at least one gene")
        for lo, hi in bounds:
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise ValueError(f"invalid gene bounds [{lo}, {hi}]")
        object.__setattr__(self, "bounds", bounds)

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    @property
    def lower(self) -> np.ndarray:
        return np.array([lo for lo, _ in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([hi for _, hi in self.bounds])


@dataclass(frozen=True)
class Candidate:
    """One population member: a genome and its cached fitness."""

    genome: np.ndarray
    fitness: float = math.inf

    def __post_init__(self):
        arr = np.asarray(self.genome, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "genome", arr)


class FitnessFunction:
    """Objective to minimize.  Subclasses set `dimension` and `evaluate`.

    `evaluate` must be deterministic for a fixed genome.  `repair` may fix
    structural constraints (e.g. ordering) after the engine's bounds clip;
    the default is a no-op.
    """

    dimension: int

    def evaluate(self, genome: np.ndarray) -> float:
        raise NotImplementedError

    def repair(self, genome: np.ndarray) -> np.ndarray:
        return genome


def donor(r1: np.ndarray, r2: np.ndarray, r3: np.ndarray, f: float) -> np.ndarray:
    """Donor vector ``r1 + f * (r2 - r3)``, not yet clipped or repaired."""
    return np.asarray(r1) + f * (np.asarray(r2) - np.asarray(r3))


def crossover(
    target: np.ndarray,
    donor_vec: np.ndarray,
    cr: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Binomial crossover with one uniformly chosen forced donor gene."""
    target = np.asarray(target)
    if target.shape != np.shape(donor_vec):
        raise ValueError("target and donor lengths differ")
    forced = int(rng.integers(target.size))
    take = rng.random(target.size) < cr
    take[forced] = True
    return np.where(take, donor_vec, target)


def select(target: Candidate, trial: Candidate) -> Candidate:
    """Greedy survivor selection; the trial wins ties.

    Classification error is a step function with wide plateaus, and letting
    the trial through on equal fitness keeps the population drifting across
    them instead of stalling.
    """
    return trial if trial.fitness <= target.fitness else target


def repair_increasing(
    values: np.ndarray, lo: float, hi: float, min_gap: float = 1e-6
) -> np.ndarray:
    """Sort and nudge a gene block into a strictly increasing, in-bounds run.

    Requires (len - 1) * min_gap <= hi - lo; the ascending pass spreads
    duplicates upward and a descending pass pulls the tail back under `hi`
    if the spreading overshot.
    """
    v = np.clip(np.sort(np.asarray(values, dtype=np.float64)), lo, hi)
    for i in range(1, v.size):
        if v[i] < v[i - 1] + min_gap:
            v[i] = v[i - 1] + min_gap
    if v[-1] > hi:
        v[-1] = hi
        for i in range(v.size - 2, -1, -1):
            if v[i] > v[i + 1] - min_gap:
                v[i] = v[i + 1] - min_gap
    return v


def _distinct_indices(
    rng: np.random.Generator, popsize: int, excluded: int
) -> tuple[int, int, int]:
    picked: list[int] = []
    while len(picked) < 3:
        j = int(rng.integers(popsize))
        if j != excluded and j not in picked:
            picked.append(j)
    return picked[0], picked[1], picked[2]


def _prepare(
    cfg: DEConfig, fitness: FitnessFunction, genome: np.ndarray
) -> Candidate:
    repaired = fitness.repair(np.clip(genome, cfg.lower, cfg.upper))
    return Candidate(repaired, fitness.evaluate(repaired))


def init_population(
    cfg: DEConfig,
    fitness: FitnessFunction,
    rng: np.random.Generator | None = None,
    seed_genomes: list[np.ndarray] | None = None,
) -> list[Candidate]:
    """Draw, repair, and evaluate `popsize` uniform-in-bounds candidates.

    `seed_genomes` overwrite the first members after the random draws so the
    generator stream (and thus the rest of the run) does not shift.
    """
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    lower, upper = cfg.lower, cfg.upper
    genomes = [
        lower + (upper - lower) * rng.random(cfg.dimension)
        for _ in range(cfg.popsize)
    ]
    for i, seeded in enumerate(seed_genomes or []):
        if i >= cfg.popsize:
            break
        genomes[i] = np.asarray(seeded, dtype=np.float64)
    return [_prepare(cfg, fitness, g) for g in genomes]


@dataclass(frozen=True)
class EvolveResult:
    """Best-ever candidate, per-generation best-fitness trace, and counters.

    `evaluations` counts fitness calls made during the generation loop; the
    `popsize` calls spent evaluating the initial population are reported
    separately as `init_evaluations`.
    """

    best: Candidate
    history: list[float] = field(repr=False)
    evaluations: int = 0
    init_evaluations: int = 0


def evolve(
    cfg: DEConfig,
    fitness: FitnessFunction,
    seed_genomes: list[np.ndarray] | None = None,
) -> EvolveResult:
    """Run rand/1/bin for `cfg.generations` full population passes.

    The best candidate is tracked over every evaluation (including the
    initial population), so the returned trace is nonincreasing.
    """
    if fitness.dimension != cfg.dimension:
        raise ValueError(
            f"fitness dimension {fitness.dimension} != bounds dimension {cfg.dimension}"
        )
    rng = np.random.default_rng(cfg.seed)
    population = init_population(cfg, fitness, rng, seed_genomes)

    best = population[0]
    for cand in population[1:]:
        if cand.fitness < best.fitness:
            best = cand

    history: list[float] = []
    evaluations = 0
    for _ in range(cfg.generations):
        for i in range(cfg.popsize):
            r1, r2, r3 = _distinct_indices(rng, cfg.popsize, i)
            donor_vec = donor(
                population[r1].genome,
                population[r2].genome,
                population[r3].genome,
                cfg.f,
            )
            trial_genome = crossover(population[i].genome, donor_vec, cfg.cr, rng)
            trial = _prepare(cfg, fitness, trial_genome)
            evaluations += 1
            population[i] = select(population[i], trial)
            if trial.fitness < best.fitness:
                best = trial
        history.append(best.fitness)
    return EvolveResult(best, history, evaluations, cfg.popsize)
