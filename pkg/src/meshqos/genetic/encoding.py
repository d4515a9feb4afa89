"""Priority-based encoding: one integer priority per node, decoded greedily."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParameterError
from ..topology import RouteQuery, Topology


@dataclass(frozen=True)
class PriorityChromosome:
    priorities: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.priorities):
            raise ParameterError("priorities must be >= 1")


def decode_priority(topology: Topology, query: RouteQuery,
                    pc: PriorityChromosome) -> tuple[int, ...] | None:
    """Walk from the source, always stepping to the unvisited neighbor with the
    highest priority (smallest id on ties). Returns ``None`` on a dead end."""
    if len(pc.priorities) != topology.node_count:
        raise ParameterError("one priority per node required")
    here = query.source
    path = [here]
    visited = {here}
    while here != query.destination:
        options = [n for n in topology.adjacency[here] if n not in visited]
        if not options:
            return None
        # adjacency is sorted, so max() keeps the smallest id among equal priorities
        here = max(options, key=lambda n: pc.priorities[n - 1])
        visited.add(here)
        path.append(here)
    return tuple(path)
