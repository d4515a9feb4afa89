# %% [markdown]
# # NSGA and the cumulative archive
#
# Instead of one weighted cost, NSGA ranks paths by Pareto dominance over
# (delay, 1/(1+bandwidth), hops). Every feasible path ever evaluated goes
# into an archive that only keeps non-dominated entries.

# %%
from meshqos.genetic import GaConfig
from meshqos.pareto import NsgaParams, default_reference, nsga_evolve
from meshqos.topology import RouteQuery, generate_connected_topology

query = RouteQuery(1, 50)
topo, _ = generate_connected_topology(query, seed=0)
cfg = GaConfig(seed=1)
res = nsga_evolve(topo, query, cfg, NsgaParams(generations=400), checkpoints=[25, 100, 400])

# %% [markdown]
# The hypervolume dominated by the archive can only grow, since entries are
# evicted only by points that dominate them.

# %%
ref = default_reference(cfg)
for snap in res.snapshots:
    print(f"gen {snap.generation:4d}: {len(snap.entries):2d} paths, hypervolume {snap.hypervolume(ref):.3f}")

# %%
for e in res.archive.sorted_entries():
    d, b, h = e.qos
    print(f"{d:7.2f} ms  {b:5.2f} Mbps  {h} hops   {' '.join(map(str, e.path))}")
