from __future__ import annotations

from dataclasses import dataclass

from ..qos import PENALTY, BandwidthRule, Constraints, QosVector, Weights, path_qos, weighted_sum_cost
from ..topology import Topology


@dataclass(frozen=True)
class Chromosome:
    path: tuple[int, ...]
    cost: float
    qos: QosVector


class Evaluator:
    """Scores paths under one run's weights, constraints and bandwidth rule.

    Results are memoized per path; the GA revisits the same routes constantly.
    """

    def __init__(self, topology: Topology, weights: Weights, constraints: Constraints,
                 rule: BandwidthRule = BandwidthRule.PAPER_LITERAL_MAX, penalty: float = PENALTY):
        self.topology = topology
        self.weights = weights
        self.constraints = constraints
        self.rule = BandwidthRule(rule)
        self.penalty = penalty
        self._cache: dict[tuple[int, ...], Chromosome] = {}

    def __call__(self, path) -> Chromosome:
        key = tuple(path)
        hit = self._cache.get(key)
        if hit is None:
            q = path_qos(self.topology, key, self.rule)
            hit = Chromosome(key, weighted_sum_cost(q, self.weights, self.constraints, self.penalty), q)
            self._cache[key] = hit
        return hit
