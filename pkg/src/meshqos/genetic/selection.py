"""The six parent-selection operators.

Every operator works on fitness ``1 / (1 + cost)``, so cheaper routes are
more likely to be picked. Operators are vectorized: ``select_indices``
draws any number of parents in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError

# Fixed order; also the tie-break order when two methods reach the same cost.
METHODS = ("RWS", "TS", "SSS", "BS", "SigSS", "RS")


@dataclass(frozen=True)
class SelectionParams:
    tournament_size: int = 2
    rank_pressure: float = 1.5
    steady_state_fraction: float = 0.5
    sigma_floor: float = 0.1
    boltzmann_t0: float = 10.0
    boltzmann_decay: float = 0.95

    def __post_init__(self):
        if self.tournament_size < 1:
            raise ParameterError("tournament_size must be >= 1")
        if not 1.0 < self.rank_pressure <= 2.0:
            raise ParameterError("rank_pressure must lie in (1, 2]")
        if not 0.0 < self.steady_state_fraction < 1.0:
            raise ParameterError("steady_state_fraction must lie in (0, 1)")
        if not self.sigma_floor > 0:
            raise ParameterError("sigma_floor must be > 0")
        if not self.boltzmann_t0 > 0:
            raise ParameterError("boltzmann_t0 must be > 0")
        if not 0.0 < self.boltzmann_decay < 1.0:
            raise ParameterError("boltzmann_decay must lie in (0, 1)")


def fitness_of(costs) -> np.ndarray:
    costs = np.asarray(costs, dtype=float)
    if np.any(costs < 0):
        raise ParameterError("costs must be non-negative")
    return 1.0 / (1.0 + costs)


def boltzmann_temperature(generation: int, params: SelectionParams) -> float:
    return params.boltzmann_t0 * params.boltzmann_decay ** generation


def selection_probabilities(fitness, method: str, generation: int = 0,
                            params: SelectionParams = SelectionParams()) -> np.ndarray:
    """Per-individual probability of being drawn as one parent.

    Defined for every method; TS and SSS have closed forms too, which the
    tests use as oracles.
    """
    f = np.asarray(fitness, dtype=float)
    n = len(f)
    if n == 0:
        raise ParameterError("empty population")
    if method == "RWS":
        w = f
    elif method == "RS":
        # linear ranking; worst gets rank 0, ties broken by position
        order = np.argsort(f, kind="stable")
        ranks = np.empty(n)
        ranks[order] = np.arange(n)
        s = params.rank_pressure
        if n == 1:
            return np.ones(1)
        w = (2.0 - s) / n + 2.0 * ranks * (s - 1.0) / (n * (n - 1))
    elif method == "SigSS":
        sigma = f.std()
        if sigma == 0:
            w = np.ones(n)
        else:
            w = np.maximum(1.0 + (f - f.mean()) / (2.0 * sigma), params.sigma_floor)
    elif method == "BS":
        t = boltzmann_temperature(generation, params)
        w = np.exp((f - f.max()) / t)
    elif method == "SSS":
        top = _steady_state_pool(f, params)
        w = np.zeros(n)
        w[top] = 1.0
    elif method == "TS":
        # P(winner in a tied group) for k draws with replacement, shared equally
        k = params.tournament_size
        w = np.empty(n)
        for value in np.unique(f):
            group = f == value
            below = np.count_nonzero(f < value)
            w[group] = (((below + group.sum()) / n) ** k - (below / n) ** k) / group.sum()
    else:
        raise ParameterError(f"unknown selection method {method!r}")
    return w / w.sum()


def _steady_state_pool(f: np.ndarray, params: SelectionParams) -> np.ndarray:
    size = max(1, math.ceil(params.steady_state_fraction * len(f)))
    return np.argsort(-f, kind="stable")[:size]


def select_indices(fitness, method: str, n: int, generation: int,
                   params: SelectionParams, rng: np.random.Generator) -> np.ndarray:
    f = np.asarray(fitness, dtype=float)
    size = len(f)
    if size == 0:
        raise ParameterError("empty population")
    if method == "TS":
        draws = rng.integers(size, size=(n, params.tournament_size))
        return draws[np.arange(n), np.argmax(f[draws], axis=1)]
    if method == "SSS":
        pool = _steady_state_pool(f, params)
        return pool[rng.integers(len(pool), size=n)]
    p = selection_probabilities(f, method, generation, params)
    return rng.choice(size, size=n, p=p)


def select_pair(population, method: str, generation: int, params: SelectionParams,
                rng: np.random.Generator):
    """Draw two parents from a list of chromosomes."""
    if not population:
        raise ParameterError("empty population")
    fit = fitness_of([c.cost for c in population])
    i, j = select_indices(fit, method, 2, generation, params, rng)
    return population[i], population[j]
