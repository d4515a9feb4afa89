"""Pareto dominance, NSGA (non-dominated sorting with fitness sharing),
a cumulative non-dominated archive, hypervolume, and weighted-sum sweeps."""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ParameterError
from .genetic.engine import _INIT, _NSGA, _SWEEP, GaConfig, breed, evolve, rng_stream
from .genetic.operators import initial_population
from .qos import QosVector, Weights, is_feasible, objective_vector
from .topology import RouteQuery, Topology


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere
    (all objectives minimized)."""
    if len(a) != len(b):
        raise ParameterError(f"dimension mismatch: {len(a)} vs {len(b)}")
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def nondominated_sort(vectors: Sequence[Sequence[float]]) -> list[list[int]]:
    """Partition indices into successive non-dominated fronts.

    Uses domination counts and dominated-sets, O(n^2 M). Indices within a
    front are ascending.
    """
    n = len(vectors)
    if n == 0:
        raise ParameterError("nothing to sort")
    v = np.asarray(vectors, dtype=float)
    # le[i, j]: i <= j everywhere; lt[i, j]: i < j somewhere
    le = np.all(v[:, None, :] <= v[None, :, :], axis=2)
    lt = np.any(v[:, None, :] < v[None, :, :], axis=2)
    dom = le & lt
    count = dom.sum(axis=0)
    fronts = []
    current = [i for i in range(n) if count[i] == 0]
    while current:
        fronts.append(current)
        nxt = []
        for i in current:
            for j in np.flatnonzero(dom[i]):
                count[j] -= 1
                if count[j] == 0:
                    nxt.append(int(j))
        current = sorted(nxt)
    return fronts


@dataclass(frozen=True)
class NsgaParams:
    sigma_share: float = 0.1
    population_size: int = 50
    generations: int = 200
    dummy_decay: float = 0.9

    def __post_init__(self):
        if not self.sigma_share > 0:
            raise ParameterError("sigma_share must be > 0")
        if self.population_size < 2 or self.generations < 1:
            raise ParameterError("population_size >= 2 and generations >= 1 required")
        if not 0 < self.dummy_decay < 1:
            raise ParameterError("dummy_decay must lie in (0, 1)")


def normalize(vectors) -> np.ndarray:
    """Per-dimension min-max scaling to [0, 1]; constant dimensions map to 0."""
    v = np.asarray(vectors, dtype=float)
    lo, hi = v.min(axis=0), v.max(axis=0)
    span = np.where(hi > lo, hi - lo, 1.0)
    return (v - lo) / span


def shared_fitness(front: Sequence[int], vectors, dummy: float,
                   params: NsgaParams = NsgaParams()) -> list[float]:
    """Degrade ``dummy`` by each member's niche count within ``front``.

    ``vectors`` must already be normalized. The niche count of a member is
    the sum of ``1 - (d / sigma_share)**2`` over front members closer than
    ``sigma_share``, itself included.
    """
    pts = np.asarray(vectors, dtype=float)[list(front)]
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    sh = np.clip(1.0 - (d / params.sigma_share) ** 2, 0.0, None)
    return (dummy / sh.sum(axis=1)).tolist()


def nsga_fitness(vectors, feasible: Sequence[bool], params: NsgaParams) -> np.ndarray:
    """Front-by-front shared dummy fitness; infeasible members rank after all
    feasible fronts."""
    v = np.asarray(vectors, dtype=float)
    norm = normalize(v)
    fronts = []
    for group in ([i for i, f in enumerate(feasible) if f],
                  [i for i, f in enumerate(feasible) if not f]):
        if group:
            fronts += [[group[k] for k in front] for front in nondominated_sort(v[group])]
    fitness = np.empty(len(v))
    dummy = float(params.population_size)
    for front in fronts:
        sh = shared_fitness(front, norm, dummy, params)
        fitness[front] = sh
        dummy = params.dummy_decay * min(sh)
    return fitness


@dataclass(frozen=True)
class ArchiveEntry:
    path: tuple[int, ...]
    qos: QosVector
    objectives: tuple[float, float, float]


@dataclass
class ParetoArchive:
    """Non-dominated set of feasible paths seen so far.

    Distinct paths with identical objective vectors are all kept.
    """

    entries: list[ArchiveEntry] = field(default_factory=list)

    def insert(self, path, qos: QosVector) -> bool:
        path = tuple(path)
        obj = objective_vector(qos)
        for e in self.entries:
            if e.path == path or dominates(e.objectives, obj):
                return False
        self.entries = [e for e in self.entries if not dominates(obj, e.objectives)]
        self.entries.append(ArchiveEntry(path, qos, obj))
        return True

    @property
    def front(self) -> list[tuple[float, float, float]]:
        return [e.objectives for e in self.entries]

    def sorted_entries(self) -> list[ArchiveEntry]:
        return sorted(self.entries, key=lambda e: (e.qos.delay, e.qos.hops, e.path))

    def __len__(self):
        return len(self.entries)


def hypervolume(front: Sequence[Sequence[float]], reference: Sequence[float]) -> float:
    """Exact dominated volume between ``front`` and ``reference``.

    Recursive slicing along the last objective; fine for the tens of
    points a routing front holds.
    """
    ref = tuple(float(r) for r in reference)
    pts = {tuple(float(x) for x in p) for p in front}
    for p in pts:
        if len(p) != len(ref):
            raise ParameterError("dimension mismatch with reference point")
        if not all(x < r for x, r in zip(p, ref)):
            raise ParameterError(f"{p} does not dominate the reference point {ref}")
    pts = [p for p in pts if not any(dominates(q, p) for q in pts)]
    return _hv(sorted(pts), ref)


def _hv(pts: list[tuple[float, ...]], ref: tuple[float, ...]) -> float:
    if not pts:
        return 0.0
    if len(ref) == 1:
        return ref[0] - min(p[0] for p in pts)
    pts = sorted(pts, key=lambda p: p[-1])
    total = 0.0
    for k, p in enumerate(pts):
        upper = pts[k + 1][-1] if k + 1 < len(pts) else ref[-1]
        if upper > p[-1]:
            total += (upper - p[-1]) * _hv([q[:-1] for q in pts[:k + 1]], ref[:-1])
    return total


@dataclass(frozen=True)
class FrontSnapshot:
    generation: int
    entries: tuple[ArchiveEntry, ...]

    def hypervolume(self, reference) -> float:
        return hypervolume([e.objectives for e in self.entries], reference)

    def to_json(self, reference) -> str:
        doc = {
            "generation": self.generation,
            "reference_point": list(reference),
            "hypervolume": self.hypervolume(reference),
            "entries": [
                {"path": list(e.path), "delay_ms": e.qos.delay,
                 "bandwidth_mbps": e.qos.bandwidth,
                 "bandwidth_transformed": e.objectives[1], "hops": e.qos.hops}
                for e in self.entries
            ],
        }
        return json.dumps(doc, indent=1) + "\n"


@dataclass
class NsgaResult:
    archive: ParetoArchive
    snapshots: list[FrontSnapshot]
    population: list[tuple[int, ...]]


def default_reference(config: GaConfig) -> tuple[float, float, float]:
    c = config.constraints
    return (c.d_max + 1.0, 2.0, c.hops_max + 1.0)


def nsga_evolve(topology: Topology, query: RouteQuery, config: GaConfig = GaConfig(),
                params: NsgaParams = NsgaParams(), checkpoints: Sequence[int] = ()) -> NsgaResult:
    """Evolve with NSGA selection and collect every feasible path evaluated into
    a cumulative archive, snapshotted after each generation in ``checkpoints``.

    Crossover, mutation, the initial population and ``Pc``/``Pm`` come from
    ``config``; population size and generation count from ``params``.
    """
    checkpoints = sorted(set(int(c) for c in checkpoints))
    if checkpoints and not 1 <= checkpoints[0] <= checkpoints[-1] <= params.generations:
        raise ParameterError("checkpoints must lie in 1..generations")
    evaluate = config.evaluator(topology)
    size = params.population_size
    n_picks = 2 * math.ceil(size / 2)
    archive = ParetoArchive()
    pop = initial_population(topology, query, size, rng_stream(config.seed, _INIT))

    def absorb(paths):
        chroms = [evaluate(p) for p in paths]
        for c in chroms:
            if is_feasible(c.qos, config.constraints):
                archive.insert(c.path, c.qos)
        return chroms

    chroms = absorb(pop)
    snapshots = []
    for g in range(1, params.generations + 1):
        vectors = [objective_vector(c.qos) for c in chroms]
        feasible = [is_feasible(c.qos, config.constraints) for c in chroms]
        fit = nsga_fitness(vectors, feasible, params)
        rng = rng_stream(config.seed, _NSGA, g)
        picks = rng.choice(len(pop), size=n_picks, p=fit / fit.sum())
        pop = breed(topology, query, pop, picks, size,
                    config.crossover_prob, config.mutation_prob, rng)
        chroms = absorb(pop)
        if g in checkpoints:
            snapshots.append(FrontSnapshot(g, tuple(archive.sorted_entries())))
    return NsgaResult(archive, snapshots, pop)


@dataclass(frozen=True)
class SweepPoint:
    weights: Weights
    path: tuple[int, ...]
    qos: QosVector
    objectives: tuple[float, float, float]
    cost: float


def sample_weights(n_samples: int, seed: int) -> list[Weights]:
    """The default triple first, then uniform draws from the weight simplex."""
    if n_samples < 1:
        raise ParameterError("n_samples must be >= 1")
    out = [Weights()]
    if n_samples > 1:
        draws = rng_stream(seed, _SWEEP).dirichlet([1.0, 1.0, 1.0], size=n_samples - 1)
        out += [Weights(*map(float, w)) for w in draws]
    return out


def _sweep_one(args) -> SweepPoint:
    topology, query, config = args
    best, _ = evolve(topology, query, config)
    return SweepPoint(config.weights, best.path, best.qos, objective_vector(best.qos), best.cost)


def weighted_sum_sweep(topology: Topology, query: RouteQuery, config: GaConfig = GaConfig(),
                       n_samples: int = 50, jobs: int = 1) -> list[SweepPoint]:
    """Run the GA once per sampled weight triple, all with ``config.seed``.
    Results come back in sample order regardless of ``jobs``."""
    tasks = [(topology, query, config.with_(weights=w))
             for w in sample_weights(n_samples, config.seed)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_sweep_one, tasks))
    return [_sweep_one(t) for t in tasks]
