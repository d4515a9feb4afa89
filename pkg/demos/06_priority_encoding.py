# %% [markdown]
# # Priority-based path encoding
#
# An alternative chromosome is a vector of node priorities. Decoding walks
# from the source, always stepping to the unvisited neighbor with the highest
# priority. Every vector decodes deterministically, but some walk into a dead
# end and decode to nothing.

# %%
import numpy as np

from meshqos.genetic import PriorityChromosome, decode_priority
from meshqos.topology import RouteQuery, generate_connected_topology

query = RouteQuery(1, 20)
topo, _ = generate_connected_topology(query, node_count=20, coverage_radius=350, seed=2)
rng = np.random.default_rng(0)

decoded = []
for _ in range(2000):
    pc = PriorityChromosome(tuple(rng.integers(1, 21, size=20)))
    decoded.append(decode_priority(topo, query, pc))

ok = [p for p in decoded if p is not None]
print(f"{len(ok)} of {len(decoded)} random priority vectors decode to a route")
print(len(set(ok)), "distinct routes reached")

# %%
lengths = np.bincount([len(p) - 1 for p in ok])
for hops, count in enumerate(lengths):
    if count:
        print(f"{hops:2d} hops: {count}")
