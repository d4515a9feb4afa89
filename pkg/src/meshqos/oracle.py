"""Exhaustive ground truth for small instances, plus a Dijkstra delay baseline."""

from __future__ import annotations

import heapq
import math

from .errors import NoRouteError, SizeError
from .pareto import ParetoArchive
from .qos import (PENALTY, BandwidthRule, Constraints, Weights, is_feasible, objective_vector,
                  path_qos, weighted_sum_cost)
from .topology import RouteQuery, Topology, check_query

MAX_NODES_GUARD = 14


def enumerate_paths(topology: Topology, query: RouteQuery,
                    max_nodes_guard: int = MAX_NODES_GUARD) -> list[tuple[int, ...]]:
    """Every simple source-to-destination path, in lexicographic order."""
    if topology.node_count > max_nodes_guard:
        raise SizeError(f"{topology.node_count} nodes exceeds enumeration guard {max_nodes_guard}")
    check_query(topology, query)
    d = query.destination
    out = []
    path = [query.source]
    on_path = {query.source}

    def walk(here):
        if here == d:
            out.append(tuple(path))
            return
        for nxt in topology.adjacency[here]:
            if nxt not in on_path:
                path.append(nxt)
                on_path.add(nxt)
                walk(nxt)
                on_path.discard(path.pop())

    walk(query.source)
    return out


def exact_weighted_optimum(topology: Topology, query: RouteQuery, weights: Weights,
                           constraints: Constraints,
                           rule: BandwidthRule = BandwidthRule.PAPER_LITERAL_MAX,
                           max_nodes_guard: int = MAX_NODES_GUARD):
    """``(path, cost)`` minimizing the weighted sum over feasible paths, or ``None``.

    Paths are scanned in lexicographic order and only a strictly lower cost
    replaces the incumbent, which gives the lexicographic tie-break.
    """
    best = None
    for p in enumerate_paths(topology, query, max_nodes_guard):
        q = path_qos(topology, p, rule)
        if not is_feasible(q, constraints):
            continue
        cost = weighted_sum_cost(q, weights, constraints, PENALTY)
        if best is None or cost < best[1]:
            best = (p, cost)
    return best


def exact_pareto_front(topology: Topology, query: RouteQuery, constraints: Constraints,
                       rule: BandwidthRule = BandwidthRule.PAPER_LITERAL_MAX,
                       max_nodes_guard: int = MAX_NODES_GUARD) -> ParetoArchive:
    archive = ParetoArchive()
    for p in enumerate_paths(topology, query, max_nodes_guard):
        q = path_qos(topology, p, rule)
        if is_feasible(q, constraints):
            archive.insert(p, q)
    return archive


def all_objective_vectors(topology: Topology, query: RouteQuery,
                          rule: BandwidthRule = BandwidthRule.PAPER_LITERAL_MAX,
                          max_nodes_guard: int = MAX_NODES_GUARD):
    return [objective_vector(path_qos(topology, p, rule))
            for p in enumerate_paths(topology, query, max_nodes_guard)]


def dijkstra_delay(topology: Topology, query: RouteQuery) -> tuple[tuple[int, ...], float]:
    """Minimum total node-delay path, counting both endpoints.

    Labels are ``(delay, path)`` so equal delays resolve to the
    lexicographically smallest node sequence.
    """
    check_query(topology, query)
    s, d = query.source, query.destination
    heap = [(topology.nodes[s - 1].delay, (s,))]
    done = set()
    while heap:
        delay, path = heapq.heappop(heap)
        here = path[-1]
        if here in done:
            continue
        done.add(here)
        if here == d:
            return path, math.fsum(topology.nodes[n - 1].delay for n in path)
        for nxt in topology.adjacency[here]:
            if nxt not in done:
                heapq.heappush(heap, (delay + topology.nodes[nxt - 1].delay, path + (nxt,)))
    raise NoRouteError(f"no route from {s} to {d}")
