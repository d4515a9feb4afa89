"""Adaptive GA: all six selection operators compete every generation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ParameterError
from ..qos import PENALTY, BandwidthRule, Constraints, Weights
from ..topology import RouteQuery, Topology
from .chromosome import Chromosome, Evaluator
from .operators import crossover, initial_population, mutate
from .selection import METHODS, SelectionParams, fitness_of, select_indices

# spawn-key tags keep the RNG streams of different phases disjoint
_INIT, _AGA, _NSGA, _SWEEP = 0, 1, 2, 3


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 50
    generations: int = 100
    crossover_prob: float = 0.75
    mutation_prob: float = 0.01
    weights: Weights = field(default_factory=Weights)
    constraints: Constraints = field(default_factory=Constraints)
    bandwidth_rule: BandwidthRule = BandwidthRule.PAPER_LITERAL_MAX
    seed: int = 0
    selection_params: SelectionParams = field(default_factory=SelectionParams)
    penalty: float = PENALTY

    def __post_init__(self):
        if self.population_size < 2:
            raise ParameterError("population_size must be >= 2")
        if self.generations < 1:
            raise ParameterError("generations must be >= 1")
        for name in ("crossover_prob", "mutation_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1]")
        object.__setattr__(self, "bandwidth_rule", BandwidthRule(self.bandwidth_rule))

    def evaluator(self, topology: Topology) -> Evaluator:
        return Evaluator(topology, self.weights, self.constraints, self.bandwidth_rule, self.penalty)

    def with_(self, **changes) -> "GaConfig":
        return replace(self, **changes)


@dataclass(frozen=True)
class GenerationReport:
    generation_index: int
    chosen_method: str
    best_cost: dict          # method -> min cost of its candidate population
    worst_cost: dict         # method -> max cost of its candidate population
    population_best_cost: float
    population_best_path: tuple[int, ...]

    def to_json(self) -> str:
        doc = {
            "generation_index": self.generation_index,
            "chosen_method": self.chosen_method,
            "best_cost": {m: self.best_cost[m] for m in METHODS},
            "worst_cost": {m: self.worst_cost[m] for m in METHODS},
            "population_best_cost": self.population_best_cost,
            "population_best_path": list(self.population_best_path),
        }
        return json.dumps(doc)


def dump_trace(trace) -> str:
    """Line-delimited JSON, one record per generation."""
    return "".join(r.to_json() + "\n" for r in trace)


def load_trace(text: str) -> list[GenerationReport]:
    out = []
    for line in text.splitlines():
        if line.strip():
            d = json.loads(line)
            d["population_best_path"] = tuple(d["population_best_path"])
            out.append(GenerationReport(**d))
    return out


def breed(topology: Topology, query: RouteQuery, parents: list[tuple[int, ...]],
          picks: np.ndarray, size: int, pc: float, pm: float,
          rng: np.random.Generator) -> list[tuple[int, ...]]:
    """Turn consecutive pairs of picked parents into ``size`` children.

    Each pair is crossed over with probability ``pc``; each child then
    undergoes one mutation attempt with probability ``pm``.
    """
    n_pairs = len(picks) // 2
    coins = rng.random((n_pairs, 3))
    children: list[tuple[int, ...]] = []
    for k in range(n_pairs):
        a, b = parents[picks[2 * k]], parents[picks[2 * k + 1]]
        if coins[k, 0] < pc:
            a, b = crossover(topology, a, b, rng)
        if coins[k, 1] < pm:
            a = mutate(topology, query, a, rng)
        if coins[k, 2] < pm:
            b = mutate(topology, query, b, rng)
        children.append(a)
        children.append(b)
    return children[:size]


def first_min(values) -> int:
    best = 0
    for i, v in enumerate(values):
        if v < values[best]:
            best = i
    return best


def evolve(topology: Topology, query: RouteQuery, config: GaConfig = GaConfig()):
    """Run the adaptive GA.

    Every generation each selection method breeds its own full candidate
    population from the current one, on its own RNG stream. The candidate
    population whose best cost is lowest is adopted, and the previous
    generation's best chromosome replaces its worst member.

    Returns ``(best_chromosome, trace)`` where ``trace`` holds one
    :class:`GenerationReport` per generation.
    """
    evaluate = config.evaluator(topology)
    size = config.population_size
    n_picks = 2 * math.ceil(size / 2)
    pop = [evaluate(p) for p in
           initial_population(topology, query, size, rng_stream(config.seed, _INIT))]
    elite = pop[first_min([c.cost for c in pop])]
    trace = []
    for g in range(config.generations):
        paths = [c.path for c in pop]
        fit = fitness_of([c.cost for c in pop])
        candidates = []
        for m, method in enumerate(METHODS):
            rng = rng_stream(config.seed, _AGA, g, m)
            picks = select_indices(fit, method, n_picks, g, config.selection_params, rng)
            kids = breed(topology, query, paths, picks, size,
                         config.crossover_prob, config.mutation_prob, rng)
            candidates.append([evaluate(p) for p in kids])
        best = [min(c.cost for c in cand) for cand in candidates]
        worst = [max(c.cost for c in cand) for cand in candidates]
        chosen = first_min(best)
        pop = list(candidates[chosen])
        costs = [c.cost for c in pop]
        pop[costs.index(max(costs))] = elite
        elite = pop[first_min([c.cost for c in pop])]
        trace.append(GenerationReport(
            generation_index=g,
            chosen_method=METHODS[chosen],
            best_cost=dict(zip(METHODS, best)),
            worst_cost=dict(zip(METHODS, worst)),
            population_best_cost=elite.cost,
            population_best_path=elite.path,
        ))
    return elite, trace


def method_summary(trace) -> dict:
    """Per-method (max, min) of the per-generation best cost over a run."""
    return {m: (max(r.best_cost[m] for r in trace), min(r.best_cost[m] for r in trace))
            for m in METHODS}
