"""Path QoS metrics, constraint checks and the weighted-sum objective."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import ParameterError, PathError
from .topology import RouteQuery, Topology, validate_path

PENALTY = 1e6


class QosVector(NamedTuple):
    delay: float
    bandwidth: float
    hops: int


class BandwidthRule(str, enum.Enum):
    """How node bandwidths along a path combine into the path bandwidth."""

    PAPER_LITERAL_MAX = "paper_literal_max"
    BOTTLENECK_MIN = "bottleneck_min"


@dataclass(frozen=True)
class Weights:
    alpha1: float = 0.5
    alpha2: float = 0.15
    alpha3: float = 0.35

    def __post_init__(self):
        for a in self:
            if not 0.0 <= a <= 1.0:
                raise ParameterError(f"weight {a} outside [0, 1]")
        if abs(sum(self) - 1.0) > 1e-9:
            raise ParameterError(f"weights must sum to 1, got {sum(self)!r}")

    def __iter__(self):
        return iter((self.alpha1, self.alpha2, self.alpha3))


@dataclass(frozen=True)
class Constraints:
    d_max: float = 50.0
    b_min: float = 1.0
    hops_max: int = 10

    def __post_init__(self):
        if not (self.d_max > 0 and self.b_min > 0 and self.hops_max > 0):
            raise ParameterError("constraints must be strictly positive")


def path_qos(topology: Topology, path: Sequence[int],
             rule: BandwidthRule = BandwidthRule.PAPER_LITERAL_MAX) -> QosVector:
    """Delay is summed over every node on the path, source and destination
    included; bandwidth is the max or min node bandwidth depending on ``rule``."""
    if len(path) < 1 or not validate_path(topology, RouteQuery(path[0], path[-1]), path):
        raise PathError(f"not a valid path: {list(path)}")
    attrs = [topology.nodes[n - 1] for n in path]
    delay = math.fsum(a.delay for a in attrs)
    bws = [a.bandwidth for a in attrs]
    bw = max(bws) if BandwidthRule(rule) is BandwidthRule.PAPER_LITERAL_MAX else min(bws)
    return QosVector(delay, bw, len(path) - 1)


def is_feasible(q: QosVector, c: Constraints) -> bool:
    return q.delay <= c.d_max and q.bandwidth >= c.b_min and q.hops <= c.hops_max


def violations(q: QosVector, c: Constraints) -> int:
    return (q.delay > c.d_max) + (q.bandwidth < c.b_min) + (q.hops > c.hops_max)


def bandwidth_transform(b: float) -> float:
    """Map bandwidth onto (0, 1) so that larger bandwidth gives a smaller value."""
    if not b > 0:
        raise ParameterError(f"bandwidth must be > 0, got {b}")
    return 1.0 / (1.0 + b)


def weighted_sum_cost(q: QosVector, w: Weights, c: Constraints, penalty: float = PENALTY) -> float:
    """Scalar cost ``a1*delay + a2/(1+bw) + a3*hops`` plus ``penalty`` per
    violated constraint. Units are mixed without normalization."""
    base = w.alpha1 * q.delay + w.alpha2 * bandwidth_transform(q.bandwidth) + w.alpha3 * q.hops
    return base + violations(q, c) * penalty


def cost_to_fitness(f: float) -> float:
    if f < 0:
        raise ParameterError(f"cost must be >= 0, got {f}")
    return 1.0 / (1.0 + f)


def objective_vector(q: QosVector) -> tuple[float, float, float]:
    """All-minimization objective triple (delay, 1/(1+bandwidth), hops)."""
    return (q.delay, bandwidth_transform(q.bandwidth), float(q.hops))
