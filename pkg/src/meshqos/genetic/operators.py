"""Path-level variation operators: random initial routes, crossover, mutation."""

from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np

from ..errors import NoRouteError
from ..topology import RouteQuery, Topology, check_query, connected, validate_path


def as_path(p) -> tuple[int, ...]:
    """Accept a Chromosome or a plain node sequence."""
    return tuple(getattr(p, "path", p))


def random_path(topology: Topology, query: RouteQuery, rng: np.random.Generator) -> tuple[int, ...]:
    """Randomized depth-first walk from source to destination.

    At each step a uniformly random unvisited neighbor is taken; dead ends
    are popped off the stack. Visited marks persist, so the walk always
    terminates and reaches the destination when it is reachable.
    """
    s, d = query.source, query.destination
    stack = [s]
    visited = {s}
    while stack:
        here = stack[-1]
        if here == d:
            return tuple(stack)
        options = [n for n in topology.adjacency[here] if n not in visited]
        if not options:
            stack.pop()
            continue
        nxt = options[int(rng.integers(len(options)))] if len(options) > 1 else options[0]
        visited.add(nxt)
        stack.append(nxt)
    raise NoRouteError(f"no route from {s} to {d}")


def initial_population(topology: Topology, query: RouteQuery, size: int,
                       rng: np.random.Generator) -> list[tuple[int, ...]]:
    check_query(topology, query)
    if not connected(topology, query.source, query.destination):
        raise NoRouteError(f"no route from {query.source} to {query.destination}")
    return [random_path(topology, query, rng) for _ in range(size)]


def remove_loops(path: Sequence[int]) -> tuple[int, ...]:
    """Cut the segment between the first and last visit of each repeated node."""
    last = {n: i for i, n in enumerate(path)}
    out = []
    i = 0
    while i < len(path):
        out.append(path[i])
        i = last[path[i]] + 1
    return tuple(out)


def crossover_at(topology: Topology, p1: Sequence[int], p2: Sequence[int],
                 node: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Exchange the suffixes of two paths after the shared ``node``.

    Children with loops are repaired; a child that is still not a valid
    route is replaced by its parent.
    """
    p1, p2 = as_path(p1), as_path(p2)
    i, j = p1.index(node), p2.index(node)
    c1 = remove_loops(p1[:i] + p2[j:])
    c2 = remove_loops(p2[:j] + p1[i:])
    query = RouteQuery(p1[0], p1[-1])
    return (c1 if validate_path(topology, query, c1) else p1,
            c2 if validate_path(topology, query, c2) else p2)


def crossover(topology: Topology, p1: Sequence[int], p2: Sequence[int],
              rng: np.random.Generator) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Single-point crossover at a uniformly chosen intermediate node common to
    both parents; parents come back unchanged when there is none."""
    p1, p2 = as_path(p1), as_path(p2)
    inner2 = set(p2[1:-1])
    common = [n for n in p1[1:-1] if n in inner2]
    if not common:
        return p1, p2
    return crossover_at(topology, p1, p2, common[int(rng.integers(len(common)))])


def shortest_hop_path(topology: Topology, source: int, target: int) -> tuple[int, ...] | None:
    """Breadth-first hop-count shortest path.

    Neighbors are expanded in ascending id order and the first discovery
    wins, so ties go to the smallest node ids.
    """
    if source == target:
        return (source,)
    parent = {source: None}
    queue = deque([source])
    while queue:
        a = queue.popleft()
        for b in topology.adjacency[a]:
            if b in parent:
                continue
            parent[b] = a
            if b == target:
                out = [b]
                while parent[out[-1]] is not None:
                    out.append(parent[out[-1]])
                return tuple(reversed(out))
            queue.append(b)
    return None


def mutate_at(topology: Topology, query: RouteQuery, path: Sequence[int], j: int) -> tuple[int, ...]:
    """Reroute through node ``j`` via shortest-hop legs s->j and j->d.

    If the two legs share any node besides ``j`` the mutation is cancelled
    and ``path`` is returned unchanged.
    """
    r1 = shortest_hop_path(topology, query.source, j)
    r2 = shortest_hop_path(topology, j, query.destination)
    if r1 is None or r2 is None or set(r1[:-1]) & set(r2[1:]):
        return as_path(path)
    return r1 + r2[1:]


def mutate(topology: Topology, query: RouteQuery, path: Sequence[int],
           rng: np.random.Generator) -> tuple[int, ...]:
    path = as_path(path)
    i = path[int(rng.integers(len(path)))]
    options = topology.adjacency[i]
    if not options:
        return path
    j = options[int(rng.integers(len(options)))]
    return mutate_at(topology, query, path, j)
