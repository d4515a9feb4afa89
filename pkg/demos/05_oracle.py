# %% [markdown]
# # Exact answers on small graphs
#
# Up to 14 nodes every simple route can be listed, which gives ground truth
# for the GA, the NSGA archive and the sweep.

# %%
from meshqos.genetic import GaConfig, evolve
from meshqos.oracle import (dijkstra_delay, enumerate_paths, exact_pareto_front,
                            exact_weighted_optimum)
from meshqos.qos import Constraints, Weights
from meshqos.topology import RouteQuery, generate_connected_topology

query = RouteQuery(1, 10)
topo, _ = generate_connected_topology(query, node_count=10, coverage_radius=450, seed=2)
paths = enumerate_paths(topo, query)
print(len(paths), "simple paths from 1 to 10")

# %%
w, c = Weights(), Constraints()
path, cost = exact_weighted_optimum(topo, query, w, c)
best, _ = evolve(topo, query, GaConfig(seed=0))
print("exact :", path, round(cost, 6))
print("GA    :", best.path, round(best.cost, 6))

# %% [markdown]
# Dijkstra with node weights gives the minimum-delay route directly; it
# should coincide with the delay-only corner of the exact front.

# %%
print("min delay:", dijkstra_delay(topo, query))
front = exact_pareto_front(topo, query, c)
print("front size:", len(front))
print("front min delay:", min(e.qos.delay for e in front.entries))

# %% [markdown]
# Larger graphs are refused rather than left to run for hours.

# %%
from meshqos.errors import SizeError

big, _ = generate_connected_topology(RouteQuery(1, 30), node_count=30, seed=0)
try:
    enumerate_paths(big, RouteQuery(1, 30))
except SizeError as exc:
    print("refused:", exc)
