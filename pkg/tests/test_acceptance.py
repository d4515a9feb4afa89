"""End-to-end acceptance checks.

Each test records a one-line verdict through the ``criterion`` fixture; the
lines are printed in the terminal summary under "acceptance criteria".
"""
import hashlib
import json
import math
import time

import numpy as np
import pytest

from meshqos.cli import main
from meshqos.errors import NoRouteError
from meshqos.genetic import GaConfig, crossover, evolve, initial_population, mutate
from meshqos.genetic.selection import SelectionParams, fitness_of, select_indices
from meshqos.oracle import (all_objective_vectors, exact_pareto_front, exact_weighted_optimum)
from meshqos.pareto import (NsgaParams, default_reference, dominates, nondominated_sort,
                            nsga_evolve, weighted_sum_sweep)
from meshqos.topology import (RouteQuery, generate_connected_topology, generate_topology,
                              save_topology, validate_path)

from conftest import small_instance

pytestmark = pytest.mark.slow

N_INSTANCES = 20
SEEDS = range(10)
CHECKPOINTS = [10, 50, 100, 200]


@pytest.fixture(scope="module")
def instances():
    return [small_instance(k) for k in range(N_INSTANCES)]


@pytest.fixture(scope="module")
def nsga_runs(instances):
    """One 200-generation NSGA run per (instance, seed), shared by two checks."""
    runs = []
    for topo, q in instances:
        cfg = GaConfig()
        exact = set(exact_pareto_front(topo, q, cfg.constraints).front)
        for seed in SEEDS:
            t0 = time.perf_counter()
            res = nsga_evolve(topo, q, cfg.with_(seed=seed), NsgaParams(generations=200),
                              CHECKPOINTS)
            runs.append((time.perf_counter() - t0, set(res.archive.front) == exact,
                         [s.hypervolume(default_reference(cfg)) for s in res.snapshots]))
    return runs


def test_weighted_sum_matches_oracle(instances, criterion):
    cfg = GaConfig(population_size=50, generations=100, crossover_prob=0.75,
                   mutation_prob=0.01)
    hits, slowest, total = 0, 0.0, 0
    for topo, q in instances:
        exact = exact_weighted_optimum(topo, q, cfg.weights, cfg.constraints)
        for seed in SEEDS:
            t0 = time.perf_counter()
            best, _ = evolve(topo, q, cfg.with_(seed=seed))
            slowest = max(slowest, time.perf_counter() - t0)
            total += 1
            hits += math.isclose(best.cost, exact[1], rel_tol=1e-9, abs_tol=1e-9)
    rate = hits / total
    ok = criterion(1, "weighted-sum oracle equivalence", rate >= 0.9 and slowest < 2.0,
                   f"{hits}/{total} = {rate:.1%} (need >= 90%), slowest run {slowest:.2f} s (< 2 s)")
    assert ok


def test_pareto_archive_matches_oracle(nsga_runs, criterion):
    hits = sum(match for _, match, _ in nsga_runs)
    slowest = max(t for t, _, _ in nsga_runs)
    rate = hits / len(nsga_runs)
    ok = criterion(2, "Pareto oracle equivalence", rate >= 0.9 and slowest < 5.0,
                   f"{hits}/{len(nsga_runs)} = {rate:.1%} (need >= 90%), "
                   f"slowest run {slowest:.2f} s (< 5 s)")
    assert ok


def test_scalarization_winners_nondominated(instances, criterion):
    dominated, checked = 0, 0
    for k, (topo, q) in enumerate(instances):
        allv = all_objective_vectors(topo, q)
        for p in weighted_sum_sweep(topo, q, GaConfig(seed=k), 10):
            assert min(p.weights) > 0
            checked += 1
            dominated += any(dominates(v, p.objectives) for v in allv)
    ok = criterion(3, "scalarization winners non-dominated", dominated == 0,
                   f"{dominated} dominated of {checked} sweep winners (need 0)")
    assert ok


def brute_force_ranks(vectors):
    n = len(vectors)
    dom = [[all(a <= b for a, b in zip(vectors[i], vectors[j]))
            and any(a < b for a, b in zip(vectors[i], vectors[j])) for j in range(n)]
           for i in range(n)]
    rank = [None] * n
    level = 0
    while None in rank:
        current = [j for j in range(n) if rank[j] is None
                   and not any(dom[i][j] for i in range(n) if rank[i] is None)]
        for j in current:
            rank[j] = level
        level += 1
    return rank


def test_nondominated_sort_matches_brute_force(criterion):
    rng = np.random.default_rng(2024)
    mismatches = 0
    for trial in range(1000):
        n = int(rng.integers(1, 65))
        # coarse integer grids force ties and duplicates; continuous ones do not
        if trial % 2:
            vectors = rng.integers(0, 5, size=(n, 3)).tolist()
        else:
            vectors = rng.random((n, 3)).tolist()
        fronts = nondominated_sort(vectors)
        got = [None] * n
        for level, front in enumerate(fronts):
            for i in front:
                got[i] = level
        mismatches += got != brute_force_ranks(vectors)
    ok = criterion(4, "non-dominated sort vs brute force", mismatches == 0,
                   f"{mismatches} mismatching populations of 1000 (need 0)")
    assert ok


def test_monotonicity(nsga_runs, criterion):
    violations_a, runs_a = 0, 0
    for t in range(10):
        topo, _ = generate_connected_topology(RouteQuery(1, 50), seed=500 + t)
        for seed in SEEDS:
            _, trace = evolve(topo, RouteQuery(1, 50), GaConfig(seed=seed))
            costs = [r.population_best_cost for r in trace]
            assert len(costs) == 100
            violations_a += sum(b > a for a, b in zip(costs, costs[1:]))
            runs_a += 1
    violations_b = sum(sum(b < a for a, b in zip(hv, hv[1:])) for _, _, hv in nsga_runs)
    ok = criterion(5, "monotonicity", violations_a == 0 and violations_b == 0,
                   f"(a) {violations_a} cost increases in {runs_a} GA runs; "
                   f"(b) {violations_b} hypervolume decreases in {len(nsga_runs)} archive runs (need 0)")
    assert ok


def test_operator_closure(criterion):
    rng = np.random.default_rng(77)
    n_cross = n_mut = bad = 0
    topo_seed = 0
    while n_cross < 100_000 or n_mut < 100_000:
        n = int(rng.integers(6, 51))
        radius = float(rng.uniform(250, 500))
        topo = generate_topology(n, (1000, 1000), radius, seed=topo_seed)
        topo_seed += 1
        q = RouteQuery(1, n)
        try:
            pop = initial_population(topo, q, 20, rng)
        except NoRouteError:
            continue
        for _ in range(1000):
            a, b = rng.integers(0, len(pop), size=2)
            for child in crossover(topo, pop[a], pop[b], rng):
                bad += not validate_path(topo, q, child)
            n_cross += 1
            m = mutate(topo, q, pop[a], rng)
            bad += not validate_path(topo, q, m)
            n_mut += 1
            pop[b] = m
    ok = criterion(6, "operator closure", bad == 0,
                   f"{bad} invalid outputs from {n_cross} crossovers and {n_mut} mutations "
                   f"on {topo_seed} topologies (need 0)")
    assert ok


def empirical(costs, method, generation=0, params=SelectionParams(), draws=100_000, seed=0):
    idx = select_indices(fitness_of(costs), method, draws, generation, params,
                         np.random.default_rng(seed))
    return np.bincount(idx, minlength=len(costs)) / draws


def test_selection_distributions(criterion):
    params = SelectionParams()
    checks = {}
    checks["RWS"] = (empirical([1, 3], "RWS"), np.array([2 / 3, 1 / 3]))
    checks["SigSS"] = (empirical([4, 4, 4, 4, 4], "SigSS"), np.full(5, 0.2))
    # linear ranking: worst rank 0, s = 1.5
    costs = [4.0, 1.0, 3.0, 2.0]
    rank = np.array([0, 3, 1, 2])
    n, s = 4, params.rank_pressure
    checks["RS"] = (empirical(costs, "RS"), (2 - s) / n + 2 * rank * (s - 1) / (n * (n - 1)))
    # Boltzmann at generation 3: T = t0 * decay^3
    temp = params.boltzmann_t0 * params.boltzmann_decay ** 3
    fit = 1 / (1 + np.array([0.5, 1.0, 2.0, 9.0]))
    w = np.exp(fit / temp)
    checks["BS"] = (empirical([0.5, 1.0, 2.0, 9.0], "BS", generation=3), w / w.sum())
    errors = {m: float(np.abs(got - want).max()) for m, (got, want) in checks.items()}
    ok = criterion(7, "selection distributions", all(e <= 0.01 for e in errors.values()),
                   ", ".join(f"{m} max error {e:.4f}" for m, e in errors.items()) + " (tol 0.01)")
    assert ok


def test_default_configuration_run(tmp_path, criterion):
    out = tmp_path / "run"
    t0 = time.perf_counter()
    code = main(["run", "--seed", "1", "--out", str(out)])
    elapsed = time.perf_counter() - t0
    manifest = json.loads((out / "manifest.json").read_text())
    cfg, gen = manifest["config"], manifest["topology"]["generated"]
    observed = {
        "nodes": gen["nodes"], "area": gen["area"], "radius": gen["radius"],
        "pop": cfg["population_size"], "gens": cfg["generations"],
        "pc": cfg["crossover_prob"], "pm": cfg["mutation_prob"], "weights": cfg["weights"],
        "s": manifest["route"]["source"], "d": manifest["route"]["destination"],
    }
    expected = {"nodes": 50, "area": [1000.0, 1000.0], "radius": 200.0, "pop": 50, "gens": 100,
                "pc": 0.75, "pm": 0.01, "weights": [0.5, 0.15, 0.35], "s": 1, "d": 50}
    methods = [ln for ln in (out / "methods.csv").read_text().splitlines()
               if ln and not ln.startswith(("#", "index"))]
    trace = [ln for ln in (out / "trace.csv").read_text().splitlines()
             if ln and not ln.startswith(("#", "generation"))]
    ok = criterion(8, "default-configuration run",
                   code == 0 and observed == expected and elapsed < 5.0
                   and len(methods) == 6 and len(trace) == 100,
                   f"defaults {'match' if observed == expected else observed}, {elapsed:.2f} s (< 5 s), "
                   f"{len(methods)} method rows, {len(trace)} trace points")
    assert ok


def digest(root):
    h = hashlib.sha256()
    for f in sorted(p for p in root.rglob("*") if p.is_file()):
        h.update(str(f.relative_to(root)).encode() + b"\0" + f.read_bytes())
    return h.hexdigest()


def test_determinism(tmp_path, criterion):
    topo, _ = small_instance(3)
    topo_file = tmp_path / "t.json"
    topo_file.write_bytes(save_topology(topo))
    commands = {
        "gen": ["gen", "--seed", "11"],
        "run": ["run", "--seed", "11"],
        "pareto": ["pareto", "--seed", "11"],
        "sweep": ["sweep", "--topology", str(topo_file), "--seed", "11", "--samples", "5",
                  "--nsga-gens", "100"],
        "oracle": ["oracle", "--topology", str(topo_file)],
    }
    differing = []
    for name, argv in commands.items():
        hashes = []
        for rep in range(2):
            out = tmp_path / f"{name}{rep}"
            if name == "gen":
                out.mkdir()
                assert main(argv + ["--out", str(out / "topology.json")]) == 0
            else:
                assert main(argv + ["--out", str(out)]) == 0
            hashes.append(digest(out))
        if hashes[0] != hashes[1]:
            differing.append(name)
    ok = criterion(9, "determinism", not differing,
                   f"byte-identical bundles for {len(commands) - len(differing)}/{len(commands)} "
                   f"commands ({', '.join(commands)})")
    assert ok


def test_geometric_model(criterion):
    rng = np.random.default_rng(10)
    mismatched = 0
    for k in range(100):
        n = int(rng.integers(2, 80))
        radius = float(rng.uniform(50, 600))
        topo = generate_topology(n, (1000, 1000), radius, seed=k)
        want = {(i + 1, j + 1)
                for i, a in enumerate(topo.nodes) for j, b in enumerate(topo.nodes)
                if i < j and math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2) <= radius}
        mismatched += set(topo.edges) != want
    ok = criterion(10, "geometric model edge sets", mismatched == 0,
                   f"{mismatched} of 100 topologies differ from the pairwise predicate (need 0)")
    assert ok
