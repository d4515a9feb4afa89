"""Random geometric mesh topologies with per-node QoS attributes.

Nodes are numbered from 1. Two distinct nodes are linked whenever their
euclidean distance is at most the coverage radius, so the edge set is a
pure function of the node positions and the radius.
"""

from __future__ import annotations

import json
import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, NoRouteError, ParameterError

log = logging.getLogger(__name__)

FORMAT_VERSION = 1

DEFAULT_NODE_COUNT = 50
DEFAULT_AREA = (1000.0, 1000.0)
DEFAULT_RADIUS = 200.0
DEFAULT_DELAY_RANGE = (1.0, 10.0)
DEFAULT_BANDWIDTH_RANGE = (1.0, 10.0)


@dataclass(frozen=True)
class NodeAttrs:
    x: float
    y: float
    delay: float
    bandwidth: float


@dataclass(frozen=True)
class RouteQuery:
    source: int
    destination: int


def within_range(p: Sequence[float], q: Sequence[float], radius: float) -> bool:
    # inclusive, no epsilon
    return math.dist(p, q) <= radius


@dataclass(frozen=True, eq=False)
class Topology:
    """Immutable node-weighted geometric graph.

    ``nodes[k]`` holds the attributes of node ``k + 1``. Edges are derived
    from positions at construction time and stored as sorted ``(u, v)``
    pairs with ``u < v``.
    """

    nodes: tuple[NodeAttrs, ...]
    area: tuple[float, float]
    coverage_radius: float
    edges: tuple[tuple[int, int], ...] = field(init=False)
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = len(self.nodes)
        pts = [(a.x, a.y) for a in self.nodes]
        adj: list[list[int]] = [[] for _ in range(n + 1)]
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if within_range(pts[u], pts[v], self.coverage_radius):
                    edges.append((u + 1, v + 1))
                    adj[u + 1].append(v + 1)
                    adj[v + 1].append(u + 1)
        object.__setattr__(self, "edges", tuple(edges))
        # index 0 is unused so adjacency[node_id] works directly
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def has_node(self, n) -> bool:
        return isinstance(n, (int, np.integer)) and 1 <= n <= len(self.nodes)

    def node(self, n: int) -> NodeAttrs:
        if not self.has_node(n):
            raise ParameterError(f"node id {n!r} outside 1..{self.node_count}")
        return self.nodes[n - 1]

    def has_edge(self, u: int, v: int) -> bool:
        return self.has_node(u) and v in self.adjacency[u]

    def __eq__(self, other):
        if not isinstance(other, Topology):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and tuple(self.area) == tuple(other.area)
            and self.coverage_radius == other.coverage_radius
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.nodes, tuple(self.area), self.coverage_radius))


def from_positions(
    positions: Iterable[Sequence[float]],
    delays: Iterable[float],
    bandwidths: Iterable[float],
    area: Sequence[float] = DEFAULT_AREA,
    coverage_radius: float = DEFAULT_RADIUS,
) -> Topology:
    """Build a topology from explicit node data, checking attribute invariants."""
    positions = [tuple(map(float, p)) for p in positions]
    delays = [float(d) for d in delays]
    bandwidths = [float(b) for b in bandwidths]
    if not len(positions) == len(delays) == len(bandwidths):
        raise ParameterError("positions, delays and bandwidths differ in length")
    width, height = map(float, area)
    if coverage_radius <= 0:
        raise ParameterError("coverage_radius must be positive")
    nodes = []
    for (x, y), d, b in zip(positions, delays, bandwidths):
        if not (0 <= x <= width and 0 <= y <= height):
            raise ParameterError(f"position ({x}, {y}) outside area {width}x{height}")
        if not d >= 0:
            raise ParameterError(f"delay must be >= 0, got {d}")
        if not b > 0:
            raise ParameterError(f"bandwidth must be > 0, got {b}")
        nodes.append(NodeAttrs(x, y, d, b))
    return Topology(tuple(nodes), (width, height), float(coverage_radius))


def generate_topology(
    node_count: int = DEFAULT_NODE_COUNT,
    area: Sequence[float] = DEFAULT_AREA,
    coverage_radius: float = DEFAULT_RADIUS,
    attr_ranges: dict | None = None,
    seed: int = 0,
) -> Topology:
    """Scatter ``node_count`` nodes uniformly over ``area``.

    Delay (ms) and bandwidth (Mbps) of every node are drawn uniformly from
    ``attr_ranges["delay"]`` and ``attr_ranges["bandwidth"]``. The result
    depends only on the arguments, so a fixed seed reproduces it exactly.
    Connectivity is not enforced; see :func:`generate_connected_topology`.
    """
    ranges = {"delay": DEFAULT_DELAY_RANGE, "bandwidth": DEFAULT_BANDWIDTH_RANGE}
    if attr_ranges:
        ranges.update(attr_ranges)
    if node_count < 2:
        raise ParameterError("node_count must be >= 2")
    if coverage_radius <= 0:
        raise ParameterError("coverage_radius must be positive")
    width, height = map(float, area)
    if width < 0 or height < 0:
        raise ParameterError("area dimensions must be non-negative")
    d_lo, d_hi = map(float, ranges["delay"])
    b_lo, b_hi = map(float, ranges["bandwidth"])
    if d_lo > d_hi or b_lo > b_hi:
        raise ParameterError("attribute range has lo > hi")
    if d_lo < 0:
        raise ParameterError("delay range must be non-negative")
    if b_lo <= 0:
        raise ParameterError("bandwidth range must be strictly positive")

    rng = np.random.default_rng(seed)
    xy = rng.uniform(0.0, 1.0, size=(node_count, 2)) * (width, height)
    delays = rng.uniform(d_lo, d_hi, size=node_count)
    bws = rng.uniform(b_lo, b_hi, size=node_count)
    return from_positions(xy.tolist(), delays.tolist(), bws.tolist(), (width, height), coverage_radius)


def neighbors(topology: Topology, n: int) -> set[int]:
    if not topology.has_node(n):
        raise ParameterError(f"node id {n!r} outside 1..{topology.node_count}")
    return set(topology.adjacency[n])


def validate_path(topology: Topology, query: RouteQuery, path) -> bool:
    """True iff ``path`` is a simple source-to-destination walk along edges."""
    try:
        nodes = list(path)
    except TypeError:
        return False
    if not nodes or nodes[0] != query.source or nodes[-1] != query.destination:
        return False
    if not all(topology.has_node(n) for n in nodes):
        return False
    if len(set(nodes)) != len(nodes):
        return False
    return all(b in topology.adjacency[a] for a, b in zip(nodes, nodes[1:]))


def check_query(topology: Topology, query: RouteQuery) -> None:
    if not (topology.has_node(query.source) and topology.has_node(query.destination)):
        raise ParameterError(f"query {query} references unknown nodes")
    if query.source == query.destination:
        raise ParameterError("source and destination must differ")


def connected(topology: Topology, u: int, v: int) -> bool:
    seen = {u}
    queue = deque([u])
    while queue:
        a = queue.popleft()
        if a == v:
            return True
        for b in topology.adjacency[a]:
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return False


def generate_connected_topology(
    query: RouteQuery,
    node_count: int = DEFAULT_NODE_COUNT,
    area: Sequence[float] = DEFAULT_AREA,
    coverage_radius: float = DEFAULT_RADIUS,
    attr_ranges: dict | None = None,
    seed: int = 0,
    max_attempts: int = 100,
) -> tuple[Topology, int]:
    """Generate with ``seed, seed + 1, ...`` until the query is routable.

    Returns the topology and the seed that produced it. Raises
    :class:`NoRouteError` after ``max_attempts`` disconnected samples.
    """
    for attempt in range(max_attempts):
        s = seed + attempt
        topo = generate_topology(node_count, area, coverage_radius, attr_ranges, s)
        check_query(topo, query)
        if connected(topo, query.source, query.destination):
            return topo, s
        log.warning("seed %d: nodes %d and %d disconnected, retrying with seed %d",
                    s, query.source, query.destination, s + 1)
    raise NoRouteError(
        f"no connected topology for {query} in {max_attempts} attempts from seed {seed}")


# -- persistence -------------------------------------------------------------

def topology_to_dict(topology: Topology) -> dict:
    return {
        "version": FORMAT_VERSION,
        "area": {"width": topology.area[0], "height": topology.area[1]},
        "coverage_radius": topology.coverage_radius,
        "nodes": [
            {"id": i, "x": a.x, "y": a.y, "delay_ms": a.delay, "bandwidth_mbps": a.bandwidth}
            for i, a in enumerate(topology.nodes, start=1)
        ],
        "edges": [list(e) for e in topology.edges],
    }


def save_topology(topology: Topology) -> bytes:
    # json writes floats via repr, which round-trips exactly
    return (json.dumps(topology_to_dict(topology), indent=1) + "\n").encode()


def _number(doc: dict, key: str, where: str):
    value = doc.get(key) if isinstance(doc, dict) else None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}{key}", f"expected a number, got {value!r}")
    return value


def load_topology(data: bytes | str) -> Topology:
    """Parse a topology document and verify it against the coverage rule."""
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise FormatError("document", f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("document", "top level must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise FormatError("version", f"unsupported version {doc.get('version')!r}")
    area = doc.get("area")
    width = _number(area, "width", "area.")
    height = _number(area, "height", "area.")
    radius = _number(doc, "coverage_radius", "")
    if radius <= 0:
        raise FormatError("coverage_radius", "must be positive")

    raw_nodes = doc.get("nodes")
    if not isinstance(raw_nodes, list) or len(raw_nodes) < 2:
        raise FormatError("nodes", "expected a list of at least two nodes")
    nodes = []
    for k, item in enumerate(raw_nodes, start=1):
        where = f"nodes[{k - 1}]."
        if not isinstance(item, dict) or item.get("id") != k:
            raise FormatError(f"{where}id", f"expected id {k}")
        x, y = _number(item, "x", where), _number(item, "y", where)
        delay, bw = _number(item, "delay_ms", where), _number(item, "bandwidth_mbps", where)
        if not (0 <= x <= width and 0 <= y <= height):
            raise FormatError(f"{where}x", "position outside area")
        if delay < 0:
            raise FormatError(f"{where}delay_ms", "must be >= 0")
        if bw <= 0:
            raise FormatError(f"{where}bandwidth_mbps", "must be > 0")
        nodes.append(NodeAttrs(float(x), float(y), float(delay), float(bw)))

    topo = Topology(tuple(nodes), (float(width), float(height)), float(radius))
    raw_edges = doc.get("edges")
    if not isinstance(raw_edges, list):
        raise FormatError("edges", "expected a list")
    try:
        stored = [tuple(e) for e in raw_edges]
    except TypeError:
        raise FormatError("edges", "entries must be [u, v] pairs") from None
    if stored != list(topo.edges):
        missing = sorted(set(topo.edges) - set(stored))
        extra = sorted(set(stored) - set(topo.edges))
        raise FormatError(
            "edges", f"inconsistent with positions and radius (missing {missing[:5]}, "
            f"unexpected {extra[:5]})")
    return topo
