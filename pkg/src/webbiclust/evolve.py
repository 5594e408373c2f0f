"""Genetic-algorithm optimization of biclusters over binary membership strings.

A chromosome is n+m bits: the first n mark member rows, the last m member
columns. Selection is fitness-proportionate (roulette wheel), crossover is
one-point within each segment independently, mutation is per-bit flip.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import Bicluster, acv, fitness, volume

Chromosome = np.ndarray  # 1-d uint8 bit vector of length n + m


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 114
    generations: int = 100
    crossover_fraction: float = 0.7  # fraction of the population replaced by offspring
    mutation_prob: float = 0.01  # per-bit flip probability
    delta: float = 0.95  # ACV threshold for nonzero fitness
    delta_mode: str = "fixed"  # "fixed" | "max-initial" (delta := best initial ACV)
    elitism: int = 1
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.crossover_fraction <= 1.0:
            raise ValueError("crossover_fraction must lie in [0, 1]")
        if not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must lie in [0, 1]")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if self.delta_mode not in ("fixed", "max-initial"):
            raise ValueError("delta_mode must be 'fixed' or 'max-initial'")
        if not 0 <= self.elitism < self.population_size:
            raise ValueError("elitism must lie in 0..population_size-1")
        if self.population_size < 1 or self.generations < 0:
            raise ValueError("population_size >= 1 and generations >= 0 required")


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    best_fitness: float
    mean_fitness: float
    best_acv: float
    best_volume: int


@dataclass(frozen=True)
class GaHistory:
    records: tuple[GenerationRecord, ...]

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["generation", "best_fitness", "mean_fitness", "best_acv", "best_volume"])
            for rec in self.records:
                writer.writerow(
                    [rec.generation, repr(rec.best_fitness), repr(rec.mean_fitness),
                     repr(rec.best_acv), rec.best_volume]
                )


def encode(b: Bicluster, n: int, m: int) -> Chromosome:
    """Bit vector with ones at member rows (first n bits) and columns (last m bits)."""
    bits = np.zeros(n + m, dtype=np.uint8)
    for r in b.rows:
        if not 0 <= r < n:
            raise ValueError(f"row index {r} out of range for n={n}")
        bits[r] = 1
    for c in b.cols:
        if not 0 <= c < m:
            raise ValueError(f"column index {c} out of range for m={m}")
        bits[n + c] = 1
    return bits


def decode(chromosome: Chromosome, n: int, m: int) -> Bicluster:
    """Inverse of encode; the result may be degenerate (fewer than 2 rows/columns)."""
    bits = np.asarray(chromosome, dtype=np.uint8)
    if bits.shape != (n + m,):
        raise ValueError(f"chromosome length {bits.size} != n+m = {n + m}")
    rows = tuple(np.flatnonzero(bits[:n]).tolist())
    cols = tuple(np.flatnonzero(bits[n:]).tolist())
    return Bicluster(rows, cols)


def select_rws(fitnesses, rng: np.random.Generator) -> int:
    """Roulette-wheel selection: index i with probability fitness_i / total.

    Falls back to uniform selection when every fitness is zero.
    """
    fit = np.asarray(fitnesses, dtype=float)
    if fit.size == 0:
        raise ValueError("select_rws requires a nonempty fitness list")
    if (fit < 0).any():
        raise ValueError("fitness values must be nonnegative")
    total = fit.sum()
    if total == 0.0:
        return int(rng.integers(fit.size))
    pick = rng.random() * total
    return int(min(np.searchsorted(np.cumsum(fit), pick, side="right"), fit.size - 1))


def crossover(p1: Chromosome, p2: Chromosome, n: int, m: int, rng: np.random.Generator):
    """One-point crossover applied to the row segment and the column segment separately."""
    if p1.shape != p2.shape or p1.size != n + m:
        raise ValueError("parents must share length n + m")
    if n < 2 or m < 2:
        raise ValueError("crossover needs n >= 2 and m >= 2 for interior cut points")
    cut_u = int(rng.integers(1, n))
    cut_p = int(rng.integers(1, m))
    c1, c2 = p1.copy(), p2.copy()
    c1[cut_u:n], c2[cut_u:n] = p2[cut_u:n].copy(), p1[cut_u:n].copy()
    c1[n + cut_p:], c2[n + cut_p:] = p2[n + cut_p:].copy(), p1[n + cut_p:].copy()
    return c1, c2


def mutate(chromosome: Chromosome, mp: float, rng: np.random.Generator) -> Chromosome:
    """Flip each bit independently with probability mp."""
    if not 0.0 <= mp <= 1.0:
        raise ValueError("mutation probability must lie in [0, 1]")
    flips = rng.random(chromosome.size) < mp
    return np.where(flips, 1 - chromosome, chromosome).astype(np.uint8)


class _Evaluator:
    """Memoized per-chromosome (fitness, acv, volume); acv is -1 for degenerates."""

    def __init__(self, data: np.ndarray, delta: float):
        self.data = data
        self.delta = delta
        self.n, self.m = data.shape
        self._cache: dict[bytes, tuple[float, float, int]] = {}

    def stats(self, chromosome: Chromosome) -> tuple[float, float, int]:
        key = chromosome.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        b = decode(chromosome, self.n, self.m)
        if len(b.rows) < 2 or len(b.cols) < 2:
            result = (0.0, -1.0, volume(b))
        else:
            a = acv(self.data, b)
            result = (float(volume(b)) if a >= self.delta else 0.0, a, volume(b))
        self._cache[key] = result
        return result

    def fitness(self, chromosome: Chromosome) -> float:
        return self.stats(chromosome)[0]


def _init_population(data, initial, cfg, rng, n, m) -> list[Chromosome]:
    if not initial:
        raise ValueError("initial population must be nonempty")
    chromosomes = [encode(b, n, m) for b in initial]
    if len(chromosomes) > cfg.population_size:
        # keep the highest-ACV members, earliest on ties
        def acv_or_low(b):
            return acv(data, b) if len(b.rows) >= 2 or len(b.cols) >= 2 else -1.0

        order = sorted(range(len(initial)), key=lambda i: (-acv_or_low(initial[i]), i))
        chromosomes = [chromosomes[i] for i in order[: cfg.population_size]]
    base = list(chromosomes)
    while len(chromosomes) < cfg.population_size:
        parent = base[int(rng.integers(len(base)))]
        chromosomes.append(mutate(parent, cfg.mutation_prob, rng))
    return chromosomes


def _next_generation(population, fitnesses, cfg, rng, n, m) -> list[Chromosome]:
    size = len(population)
    order = sorted(range(size), key=lambda i: (-fitnesses[i], i))
    elites = [population[i].copy() for i in order[: cfg.elitism]]
    n_cross = min(round(cfg.crossover_fraction * size), size - len(elites))
    children: list[Chromosome] = []
    while len(children) < n_cross:
        i = select_rws(fitnesses, rng)
        j = select_rws(fitnesses, rng)
        c1, c2 = crossover(population[i], population[j], n, m, rng)
        children.append(c1)
        if len(children) < n_cross:
            children.append(c2)
    copies = [
        population[select_rws(fitnesses, rng)].copy()
        for _ in range(size - len(elites) - n_cross)
    ]
    mutated = [mutate(c, cfg.mutation_prob, rng) for c in children + copies]
    return elites + mutated


def run_ga(matrix, initial: list[Bicluster], cfg: GaConfig):
    """Evolve the population for cfg.generations; returns (best, population, history).

    best is the highest-fitness bicluster ever observed (ties broken by
    higher ACV, then earlier appearance); population is the final
    generation's chromosomes.
    """
    data = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    n, m = data.shape
    rng = np.random.default_rng(cfg.seed)
    population = _init_population(data, initial, cfg, rng, n, m)

    delta = cfg.delta
    if cfg.delta_mode == "max-initial":
        best_initial = max(
            (acv(data, b) for b in initial if len(b.rows) >= 2 or len(b.cols) >= 2),
            default=0.0,
        )
        delta = min(best_initial, 1.0)
    evaluator = _Evaluator(data, delta)

    def track(best, chromosome):
        fit, a, _ = evaluator.stats(chromosome)
        if best is None or fit > best[0] or (fit == best[0] and a > best[1]):
            return (fit, a, chromosome.copy())
        return best

    best = None
    fitnesses = [evaluator.fitness(c) for c in population]
    for c in population:
        best = track(best, c)

    records = []
    for gen in range(1, cfg.generations + 1):
        population = _next_generation(population, fitnesses, cfg, rng, n, m)
        fitnesses = [evaluator.fitness(c) for c in population]
        for c in population:
            best = track(best, c)
        top = min(range(len(population)), key=lambda i: (-fitnesses[i], i))
        _, top_acv, top_vol = evaluator.stats(population[top])
        records.append(
            GenerationRecord(
                generation=gen,
                best_fitness=fitnesses[top],
                mean_fitness=float(np.mean(fitnesses)),
                best_acv=max(top_acv, 0.0),
                best_volume=top_vol,
            )
        )
    history = GaHistory(tuple(records))
    return decode(best[2], n, m), population, history


def distinct_fit_biclusters(matrix, population: list[Chromosome], delta: float) -> list[Bicluster]:
    """Deduplicated nonzero-fitness biclusters of a population, in population order."""
    data = np.asarray(getattr(matrix, "values", matrix), dtype=float)
    n, m = data.shape
    seen: set[bytes] = set()
    out: list[Bicluster] = []
    for c in population:
        key = c.tobytes()
        if key in seen:
            continue
        seen.add(key)
        b = decode(c, n, m)
        if fitness(data, b, delta) > 0:
            out.append(b)
    return out
