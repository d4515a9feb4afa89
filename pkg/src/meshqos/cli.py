"""Command-line front end: gen | run | pareto | sweep | oracle.

Every command writes its whole output bundle only after all computation
succeeded. Failures are reported through the exit code alone:
2 bad arguments, 3 no route, 4 bad topology file, 5 instance too large
for enumeration.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import FormatError, NoRouteError, ParameterError, SizeError
from .genetic import METHODS, GaConfig, evolve, method_summary
from .oracle import (MAX_NODES_GUARD, all_objective_vectors, dijkstra_delay, enumerate_paths,
                     exact_pareto_front, exact_weighted_optimum)
from .pareto import (NsgaParams, default_reference, dominates, hypervolume, nsga_evolve,
                     weighted_sum_sweep)
from .qos import (BandwidthRule, Constraints, Weights, cost_to_fitness, is_feasible,
                  path_qos, weighted_sum_cost)
from .topology import (DEFAULT_AREA, DEFAULT_BANDWIDTH_RANGE, DEFAULT_DELAY_RANGE,
                       DEFAULT_NODE_COUNT, DEFAULT_RADIUS, RouteQuery, check_query, connected,
                       generate_connected_topology, load_topology, save_topology, validate_path)

log = logging.getLogger("meshqos")

EXIT_PARAM, EXIT_NO_ROUTE, EXIT_TOPOLOGY, EXIT_SIZE = 2, 3, 4, 5

RULES = {"paper-max": BandwidthRule.PAPER_LITERAL_MAX,
         "bottleneck-min": BandwidthRule.BOTTLENECK_MIN}


class TopologyFileError(Exception):
    pass


def _floats(n):
    def parse(text):
        try:
            values = [float(x) for x in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers") from None
        if len(values) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers")
        return values
    return parse


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError("expected comma-separated integers") from None


def _pair(text):
    values = _ints(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError("expected s,d")
    return values


def _fmt(values):
    return ",".join(repr(float(v)) if isinstance(v, float) else str(v) for v in values)


# -- parser ------------------------------------------------------------------

def _add_gen_flags(p, require_seed=True):
    p.add_argument("--seed", type=int, required=require_seed)
    p.add_argument("--nodes", type=int, default=DEFAULT_NODE_COUNT)
    p.add_argument("--width", type=float, default=DEFAULT_AREA[0])
    p.add_argument("--height", type=float, default=DEFAULT_AREA[1])
    p.add_argument("--radius", type=float, default=DEFAULT_RADIUS)
    p.add_argument("--delay-range", type=_floats(2), default=list(DEFAULT_DELAY_RANGE))
    p.add_argument("--bandwidth-range", type=_floats(2), default=list(DEFAULT_BANDWIDTH_RANGE))


def _add_ga_flags(p):
    p.add_argument("--topology", help="topology file; generated from --seed when omitted")
    p.add_argument("--source", type=int, default=1)
    p.add_argument("--dest", type=int, help="defaults to the highest node id")
    p.add_argument("--out", default="out")
    p.add_argument("--bandwidth-rule", choices=sorted(RULES), default="paper-max")
    p.add_argument("--weights", type=_floats(3), default=[0.5, 0.15, 0.35])
    p.add_argument("--constraints", type=_floats(3), default=[50.0, 1.0, 10.0])
    p.add_argument("--pop", type=int, default=50)
    p.add_argument("--gens", type=int, default=100)
    p.add_argument("--pc", type=float, default=0.75)
    p.add_argument("--pm", type=float, default=0.01)
    p.add_argument("--manifest", help="replay the configuration stored in a manifest")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meshqos", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"meshqos {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random geometric topology")
    _add_gen_flags(p)
    p.add_argument("--require-route", type=_pair, metavar="S,D")
    p.add_argument("--out", help="output file (stdout when omitted)")

    p = sub.add_parser("run", help="adaptive GA with weighted-sum cost")
    _add_gen_flags(p, require_seed=False)
    _add_ga_flags(p)
    p.add_argument("--paths", help="file of named paths to compare, one per line: name: n1 n2 ...")
    p.add_argument("--oracle-check", action="store_true")

    p = sub.add_parser("pareto", help="NSGA run with cumulative Pareto archive")
    _add_gen_flags(p, require_seed=False)
    _add_ga_flags(p)
    p.add_argument("--checkpoints", type=_ints, default=[100, 200, 1000])
    p.add_argument("--sigma-share", type=float, default=0.1)
    p.add_argument("--oracle-check", action="store_true")

    p = sub.add_parser("sweep", help="weighted-sum runs over random weights plus one NSGA run")
    _add_gen_flags(p, require_seed=False)
    _add_ga_flags(p)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--nsga-gens", type=int, default=200)
    p.add_argument("--sigma-share", type=float, default=0.1)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("oracle", help="exhaustive results on a small topology")
    p.add_argument("--topology", required=True)
    p.add_argument("--source", type=int, default=1)
    p.add_argument("--dest", type=int)
    p.add_argument("--out", help="output directory (stdout when omitted)")
    p.add_argument("--bandwidth-rule", choices=sorted(RULES), default="paper-max")
    p.add_argument("--weights", type=_floats(3), default=[0.5, 0.15, 0.35])
    p.add_argument("--constraints", type=_floats(3), default=[50.0, 1.0, 10.0])
    p.add_argument("--guard", type=int, default=MAX_NODES_GUARD)
    return parser


_NOT_REPLAYED = {"command", "out", "manifest"}


def resolved_argv(args) -> list[str]:
    """Flags reproducing ``args`` exactly, every option spelled out."""
    argv = [args.command]
    for key, value in sorted(vars(args).items()):
        if key in _NOT_REPLAYED or value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, list):
            argv += [flag, _fmt(value)]
        else:
            argv += [flag, repr(value) if isinstance(value, float) else str(value)]
    return argv


# -- shared plumbing ---------------------------------------------------------

def _ga_config(args) -> GaConfig:
    dmax, bmin, hmax = args.constraints
    if hmax != int(hmax):
        raise ParameterError("hops_max must be an integer")
    return GaConfig(
        population_size=args.pop, generations=args.gens,
        crossover_prob=args.pc, mutation_prob=args.pm,
        weights=Weights(*args.weights),
        constraints=Constraints(dmax, bmin, int(hmax)),
        bandwidth_rule=RULES[args.bandwidth_rule], seed=args.seed,
    )


def _read_topology(path):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise TopologyFileError(str(exc)) from None
    try:
        return load_topology(data), {"file": str(path), "sha256": hashlib.sha256(data).hexdigest()}
    except FormatError as exc:
        raise TopologyFileError(str(exc)) from None


def _topology_for(args):
    """Load ``--topology`` or generate one from the generation flags."""
    if args.topology:
        topo, source = _read_topology(args.topology)
        dest = args.dest if args.dest is not None else topo.node_count
    else:
        dest = args.dest if args.dest is not None else args.nodes
        query = RouteQuery(args.source, dest)
        topo, used = generate_connected_topology(
            query, args.nodes, (args.width, args.height), args.radius,
            {"delay": args.delay_range, "bandwidth": args.bandwidth_range}, args.seed)
        source = {"generated": {"nodes": args.nodes, "area": [args.width, args.height],
                                "radius": args.radius, "delay_range": args.delay_range,
                                "bandwidth_range": args.bandwidth_range,
                                "requested_seed": args.seed, "seed": used},
                  "sha256": hashlib.sha256(save_topology(topo)).hexdigest()}
    query = RouteQuery(args.source, dest)
    check_query(topo, query)
    if not connected(topo, query.source, query.destination):
        raise NoRouteError(f"no route from {query.source} to {query.destination}")
    return topo, query, source


def _manifest(args, config: dict, topology_source, query: RouteQuery) -> str:
    doc = {"tool": "meshqos", "version": __version__, "command": args.command,
           "seed": getattr(args, "seed", None), "topology": topology_source,
           "route": {"source": query.source, "destination": query.destination},
           "config": config, "argv": resolved_argv(args)}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _config_doc(config: GaConfig) -> dict:
    sp = config.selection_params
    return {
        "population_size": config.population_size, "generations": config.generations,
        "crossover_prob": config.crossover_prob, "mutation_prob": config.mutation_prob,
        "weights": list(config.weights),
        "constraints": {"d_max": config.constraints.d_max, "b_min": config.constraints.b_min,
                        "hops_max": config.constraints.hops_max},
        "bandwidth_rule": config.bandwidth_rule.value, "penalty": config.penalty,
        "selection_params": {k: getattr(sp, k) for k in sp.__dataclass_fields__},
        "seed": config.seed,
    }


def _csv(header_comment, columns, rows) -> str:
    buf = io.StringIO()
    for line in header_comment:
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _p(path) -> str:
    return " ".join(map(str, path))


def _write_bundle(out: str, files: dict[str, str]) -> None:
    root = Path(out)
    for name, text in files.items():
        target = root / name
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_name(target.name + ".tmp")
        tmp.write_text(text)
        os.replace(tmp, target)


def _qos_doc(qos) -> dict:
    return {"delay_ms": qos.delay, "bandwidth_mbps": qos.bandwidth, "hops": qos.hops}


# -- commands ----------------------------------------------------------------

def cmd_gen(args) -> dict[str, str]:
    area = (args.width, args.height)
    ranges = {"delay": args.delay_range, "bandwidth": args.bandwidth_range}
    if args.require_route:
        query = RouteQuery(*args.require_route)
        topo, _ = generate_connected_topology(query, args.nodes, area, args.radius, ranges,
                                              args.seed)
    else:
        from .topology import generate_topology
        topo = generate_topology(args.nodes, area, args.radius, ranges, args.seed)
    return {"topology": save_topology(topo).decode()}


def _named_paths(text):
    for k, line in enumerate(text.splitlines(), start=1):
        line = line.split("#")[0].strip()
        if not line:
            continue
        name, _, rest = line.rpartition(":")
        try:
            nodes = tuple(int(x) for x in rest.replace(",", " ").split())
        except ValueError:
            raise ParameterError(f"--paths line {k}: node ids must be integers") from None
        yield (name.strip() or f"P{k}"), nodes


def cmd_run(args) -> dict[str, str]:
    config = _ga_config(args)
    topo, query, source = _topology_for(args)
    oracle = None
    if args.oracle_check:
        oracle = exact_weighted_optimum(topo, query, config.weights, config.constraints,
                                        config.bandwidth_rule)
    best, trace = evolve(topo, query, config)

    best_doc = {"path": list(best.path), **_qos_doc(best.qos), "cost": best.cost,
                "fitness": cost_to_fitness(best.cost),
                "feasible": is_feasible(best.qos, config.constraints)}
    if args.oracle_check:
        best_doc["oracle"] = (
            {"path": list(oracle[0]), "cost": oracle[1],
             "match": abs(oracle[1] - best.cost) <= 1e-9 * max(1.0, abs(oracle[1]))}
            if oracle else {"path": None, "cost": None, "match": not best_doc["feasible"]})

    base = trace[0].population_best_cost
    trace_rows = [
        [r.generation_index, r.chosen_method, r.population_best_cost,
         r.population_best_cost / base if base else 1.0,
         *[r.best_cost[m] for m in METHODS], _p(r.population_best_path)]
        for r in trace]
    files = {
        "manifest.json": _manifest(args, _config_doc(config), source, query),
        "best.json": json.dumps(best_doc, indent=1) + "\n",
        "trace.csv": _csv(
            ["normalized_cost = population_best_cost / population_best_cost of generation 0"],
            ["generation", "chosen_method", "population_best_cost", "normalized_cost",
             *[f"best_{m}" for m in METHODS], "population_best_path"], trace_rows),
    }
    summary = method_summary(trace)
    chosen = [r.chosen_method for r in trace]
    files["methods.csv"] = _csv(
        ["per-method maximum and minimum of the generation-best cost over the run"],
        ["index", "method", "maximum", "minimum", "times_chosen"],
        [[k, m, *summary[m], chosen.count(m)] for k, m in enumerate(METHODS, start=1)])

    if args.paths:
        try:
            text = Path(args.paths).read_text()
        except OSError as exc:
            raise ParameterError(f"--paths: {exc}") from None
        rows = []
        for name, nodes in _named_paths(text):
            if validate_path(topo, query, nodes):
                q = path_qos(topo, nodes, config.bandwidth_rule)
                cost = weighted_sum_cost(q, config.weights, config.constraints, config.penalty)
                rows.append([name, _p(nodes), True, q.delay, q.bandwidth, q.hops, cost,
                             cost_to_fitness(cost)])
            else:
                rows.append([name, _p(nodes), False, "", "", "", "", ""])
        files["paths.csv"] = _csv([], ["name", "path", "valid", "delay_ms", "bandwidth_mbps",
                                       "hops", "cost", "fitness"], rows)
    return files


def cmd_pareto(args) -> dict[str, str]:
    config = _ga_config(args)
    if not args.checkpoints or min(args.checkpoints) < 1:
        raise ParameterError("--checkpoints must be positive generation counts")
    params = NsgaParams(args.sigma_share, args.pop, max(args.checkpoints))
    topo, query, source = _topology_for(args)
    exact = None
    if args.oracle_check:
        exact = exact_pareto_front(topo, query, config.constraints, config.bandwidth_rule)
    result = nsga_evolve(topo, query, config, params, args.checkpoints)
    ref = default_reference(config)
    cfg = _config_doc(config)
    cfg["nsga"] = {"sigma_share": params.sigma_share, "population_size": params.population_size,
                   "generations": params.generations, "dummy_decay": params.dummy_decay,
                   "checkpoints": sorted(set(args.checkpoints)), "reference_point": list(ref)}
    files = {"manifest.json": _manifest(args, cfg, source, query)}
    rows = []
    for snap in result.snapshots:
        files[f"fronts/gen_{snap.generation:06d}.json"] = snap.to_json(ref)
        rows.append([snap.generation, snap.hypervolume(ref), len(snap.entries)])
    files["hypervolume.csv"] = _csv([f"reference_point = {_fmt(ref)}"],
                                    ["generation", "hypervolume", "front_size"], rows)
    if exact is not None:
        got, want = set(result.archive.front), set(exact.front)
        diff = {"equal": got == want,
                "missing": sorted(map(list, want - got)),
                "extra": sorted(map(list, got - want)),
                "exact_hypervolume": hypervolume(list(want), ref),
                "archive_hypervolume": hypervolume(list(got), ref)}
        files["fronts/oracle_diff.json"] = json.dumps(diff, indent=1) + "\n"
    return files


def cmd_sweep(args) -> dict[str, str]:
    config = _ga_config(args)
    if args.samples < 1:
        raise ParameterError("--samples must be >= 1")
    if args.jobs < 1:
        raise ParameterError("--jobs must be >= 1")
    topo, query, source = _topology_for(args)
    points = weighted_sum_sweep(topo, query, config, args.samples, args.jobs)
    params = NsgaParams(args.sigma_share, args.pop, args.nsga_gens)
    archive = nsga_evolve(topo, query, config, params).archive
    rows = []
    for k, pt in enumerate(points):
        rows.append(["fixed-weights" if k == 0 else "random-weights", k, *pt.weights,
                     _p(pt.path), pt.qos.delay, pt.qos.bandwidth, pt.objectives[1],
                     pt.qos.hops, pt.cost])
    for e in archive.sorted_entries():
        rows.append(["pareto-archive", "", "", "", "", _p(e.path), e.qos.delay,
                     e.qos.bandwidth, e.objectives[1], e.qos.hops, ""])
    cfg = _config_doc(config)
    cfg["samples"] = args.samples
    cfg["nsga"] = {"sigma_share": params.sigma_share, "generations": params.generations}
    return {
        "manifest.json": _manifest(args, cfg, source, query),
        "sweep.csv": _csv([], ["tag", "sample", "alpha1", "alpha2", "alpha3", "path",
                               "delay_ms", "bandwidth_mbps", "bandwidth_transformed", "hops",
                               "cost"], rows),
    }


def cmd_oracle(args) -> dict[str, str]:
    topo, _ = _read_topology(args.topology)
    query = RouteQuery(args.source, args.dest if args.dest is not None else topo.node_count)
    check_query(topo, query)
    rule = RULES[args.bandwidth_rule]
    dmax, bmin, hmax = args.constraints
    constraints = Constraints(dmax, bmin, int(hmax))
    weights = Weights(*args.weights)
    paths = enumerate_paths(topo, query, args.guard)
    opt = exact_weighted_optimum(topo, query, weights, constraints, rule, args.guard)
    front = exact_pareto_front(topo, query, constraints, rule, args.guard)
    doc = {
        "query": [query.source, query.destination],
        "paths": [{"path": list(p), **_qos_doc(path_qos(topo, p, rule))} for p in paths],
        "weighted_optimum": {"path": list(opt[0]), "cost": opt[1]} if opt else None,
        "pareto_front": [{"path": list(e.path), **_qos_doc(e.qos)} for e in front.sorted_entries()],
        "dijkstra_delay": None,
    }
    if paths:
        p, d = dijkstra_delay(topo, query)
        doc["dijkstra_delay"] = {"path": list(p), "delay_ms": d}
    return {"oracle.json": json.dumps(doc, indent=1) + "\n"}


COMMANDS = {"gen": cmd_gen, "run": cmd_run, "pareto": cmd_pareto, "sweep": cmd_sweep,
            "oracle": cmd_oracle}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(name)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "manifest", None):
        try:
            stored = json.loads(Path(args.manifest).read_text())["argv"]
        except (OSError, ValueError, KeyError) as exc:
            parser.error(f"--manifest: {exc}")
        out = args.out
        args = parser.parse_args(stored)
        args.out = out
    if getattr(args, "seed", 0) is None:
        parser.error("--seed is required")
    try:
        files = COMMANDS[args.command](args)
    except ParameterError as exc:
        log.error("%s", exc)
        return EXIT_PARAM
    except NoRouteError as exc:
        log.error("%s", exc)
        return EXIT_NO_ROUTE
    except TopologyFileError as exc:
        log.error("bad topology file: %s", exc)
        return EXIT_TOPOLOGY
    except SizeError as exc:
        log.error("%s", exc)
        return EXIT_SIZE

    if args.command == "gen":
        if args.out:
            _write_bundle(".", {args.out: files["topology"]})
        else:
            sys.stdout.write(files["topology"])
    elif args.command == "oracle" and not args.out:
        sys.stdout.write(files["oracle.json"])
    else:
        _write_bundle(args.out, files)
    return 0


if __name__ == "__main__":
    sys.exit(main())
