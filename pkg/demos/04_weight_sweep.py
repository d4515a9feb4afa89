# %% [markdown]
# # Sweeping the weights
#
# Minimizing a positively weighted sum always lands on a Pareto-optimal
# path. Sampling many weight vectors therefore traces out part of the front,
# but only its convex hull: front points in concave dents are never a
# weighted-sum winner.

# %%
from meshqos.genetic import GaConfig
from meshqos.oracle import exact_pareto_front
from meshqos.pareto import weighted_sum_sweep
from meshqos.topology import RouteQuery, generate_connected_topology

query = RouteQuery(1, 12)
topo, _ = generate_connected_topology(query, node_count=12, coverage_radius=420, seed=3)
cfg = GaConfig(seed=5, generations=60)
points = weighted_sum_sweep(topo, query, cfg, n_samples=25)

for p in points:
    w = ", ".join(f"{x:.2f}" for x in p.weights)
    print(f"({w})  ->  {' '.join(map(str, p.path)):24s} cost {p.cost:.3f}")

# %% [markdown]
# Compare with the exact front. The graph is small enough to enumerate.
# Objectives are not rescaled before weighting: delay spans tens of ms while
# the bandwidth term stays below 0.5, so the short low-delay route wins for
# almost every weight vector.

# %%
front = exact_pareto_front(topo, query, cfg.constraints)
reached = {p.path for p in points}
for e in front.sorted_entries():
    mark = "*" if e.path in reached else " "
    print(mark, e.path, tuple(round(v, 3) for v in e.objectives))
