# %% [markdown]
# # Random mesh topologies
#
# Nodes are dropped uniformly on a rectangle and two nodes hear each other
# when their distance is at most the coverage radius. Delay and bandwidth
# are properties of the nodes, not the links.

# %%
import numpy as np

from meshqos.topology import RouteQuery, connected, generate_connected_topology, generate_topology

topo = generate_topology(50, (1000, 1000), 200, seed=4)
degree = np.array([len(topo.adjacency[n]) for n in range(1, topo.node_count + 1)])
print(f"{topo.node_count} nodes, {len(topo.edges)} links")
print("degree min/mean/max:", degree.min(), round(degree.mean(), 2), degree.max())

# %% [markdown]
# Sparse draws are often split into islands. Whether 1 can reach 50 decides
# if the instance is usable at all.

# %%
for seed in range(8):
    t = generate_topology(50, (1000, 1000), 200, seed=seed)
    print(seed, "1 -> 50 reachable:", connected(t, 1, 50))

# %% [markdown]
# `generate_connected_topology` walks forward through seeds until the route
# exists and reports which seed it ended up using.

# %%
topo, used = generate_connected_topology(RouteQuery(1, 50), seed=0)
print("seed used:", used)

# %%
attrs = np.array([(a.delay, a.bandwidth) for a in topo.nodes])
print("delay range (ms):", attrs[:, 0].min().round(2), "-", attrs[:, 0].max().round(2))
print("bandwidth range (Mbps):", attrs[:, 1].min().round(2), "-", attrs[:, 1].max().round(2))
