# %% [markdown]
# # Adaptive GA on a 50-node mesh
#
# Each generation all six selection schemes breed a candidate population and
# the best one is kept. The trace records which scheme won.

# %%
from collections import Counter

from meshqos.genetic import GaConfig, evolve, method_summary
from meshqos.qos import cost_to_fitness
from meshqos.topology import RouteQuery, generate_connected_topology

query = RouteQuery(1, 50)
topo, _ = generate_connected_topology(query, seed=12)
best, trace = evolve(topo, query, GaConfig(seed=3))

print("best path:", " ".join(map(str, best.path)))
print(f"delay {best.qos.delay:.2f} ms, bandwidth {best.qos.bandwidth:.2f} Mbps, {best.qos.hops} hops")
print(f"cost {best.cost:.4f}, fitness {cost_to_fitness(best.cost):.4f}")

# %%
for r in trace[::10]:
    print(f"gen {r.generation_index:3d}  {r.chosen_method:5s}  best {r.population_best_cost:.4f}")

# %% [markdown]
# How often each scheme won, and the spread of its per-generation best.
# When several schemes reach the same best cost the earliest in the fixed
# order wins, so on an easy instance RWS collects most of the wins.

# %%
wins = Counter(r.chosen_method for r in trace)
for method, (hi, lo) in method_summary(trace).items():
    print(f"{method:5s} wins {wins[method]:3d}   max {hi:.4f}   min {lo:.4f}")

# %% [markdown]
# Tightening the delay bound makes more paths infeasible; those pay a large
# additive penalty, so the GA steers away from them whenever it can.

# %%
from meshqos.qos import Constraints

tight = GaConfig(seed=3, constraints=Constraints(d_max=15, b_min=1, hops_max=10))
b2, _ = evolve(topo, query, tight)
print("with d_max=15:", b2.path, round(b2.qos.delay, 2), "ms, cost", round(b2.cost, 4))
