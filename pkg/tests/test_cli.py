import csv
import hashlib
import json

import pytest

from meshqos.cli import main
from meshqos.topology import from_positions, load_topology, save_topology

from conftest import small_instance


def bundle_digest(root):
    h = hashlib.sha256()
    for f in sorted(p for p in root.rglob("*") if p.is_file()):
        h.update(str(f.relative_to(root)).encode())
        h.update(f.read_bytes())
    return h.hexdigest()


def rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(lines))


@pytest.fixture
def small_file(tmp_path):
    topo, _ = small_instance(0)
    f = tmp_path / "small.json"
    f.write_bytes(save_topology(topo))
    return f


def write(tmp_path, name, topo):
    f = tmp_path / name
    f.write_bytes(save_topology(topo))
    return f


def test_gen_defaults_and_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["gen", "--seed", "7", "--out", str(a)]) == 0
    assert main(["gen", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    topo = load_topology(a.read_bytes())
    assert topo.node_count == 50 and topo.area == (1000.0, 1000.0)
    assert topo.coverage_radius == 200.0


def test_gen_requires_seed(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(["gen", "--out", str(tmp_path / "x.json")])
    assert err.value.code == 2


def test_gen_retries_until_connected(tmp_path, caplog):
    out = tmp_path / "two.json"
    assert main(["gen", "--nodes", "2", "--seed", "1", "--require-route", "1,2",
                 "--out", str(out)]) == 0
    assert (1, 2) in load_topology(out.read_bytes()).edges
    assert "retrying" in caplog.text


def test_gen_gives_up_with_exit_3(tmp_path):
    assert main(["gen", "--nodes", "2", "--radius", "0.001", "--seed", "1",
                 "--require-route", "1,2", "--out", str(tmp_path / "x.json")]) == 3
    assert not (tmp_path / "x.json").exists()


def test_gen_bad_range_exit_2(tmp_path):
    assert main(["gen", "--seed", "1", "--delay-range", "5,1",
                 "--out", str(tmp_path / "x.json")]) == 2


def test_run_bundle(tmp_path, small_file):
    out = tmp_path / "run"
    assert main(["run", "--topology", str(small_file), "--seed", "3", "--out", str(out),
                 "--oracle-check"]) == 0
    best = json.loads((out / "best.json").read_text())
    assert best["oracle"]["match"] is True
    assert best["path"][0] == 1 and best["path"][-1] == 10
    trace = rows(out / "trace.csv")
    assert len(trace) == 100
    assert float(trace[0]["normalized_cost"]) == 1.0
    methods = rows(out / "methods.csv")
    assert [m["method"] for m in methods] == ["RWS", "TS", "SSS", "BS", "SigSS", "RS"]
    assert all(float(m["maximum"]) >= float(m["minimum"]) for m in methods)
    assert sum(int(m["times_chosen"]) for m in methods) == 100
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["config"]["weights"] == [0.5, 0.15, 0.35]


def test_run_chain_topology(tmp_path):
    chain = from_positions([(0, 0), (100, 0), (200, 0)], [1, 2, 3], [4, 5, 6], (1000, 1000), 100)
    f = write(tmp_path, "chain.json", chain)
    out = tmp_path / "run"
    assert main(["run", "--topology", str(f), "--seed", "1", "--gens", "3", "--out", str(out)]) == 0
    best = json.loads((out / "best.json").read_text())
    assert best["path"] == [1, 2, 3]
    assert best["cost"] == pytest.approx(0.5 * 6 + 0.15 / 7 + 0.35 * 2)


def test_run_named_paths(tmp_path, small_file):
    topo = load_topology(small_file.read_bytes())
    from meshqos.oracle import enumerate_paths
    from meshqos.topology import RouteQuery
    paths = enumerate_paths(topo, RouteQuery(1, 10))[:3]
    listing = tmp_path / "paths.txt"
    listing.write_text("".join(f"P{k}: {' '.join(map(str, p))}\n" for k, p in enumerate(paths, 1))
                    + "bogus: 1 10 1\n")
    out = tmp_path / "run"
    assert main(["run", "--topology", str(small_file), "--seed", "1", "--gens", "5",
                 "--paths", str(listing), "--out", str(out)]) == 0
    table = rows(out / "paths.csv")
    assert [r["name"] for r in table] == ["P1", "P2", "P3", "bogus"]
    assert [r["valid"] for r in table] == ["True", "True", "True", "False"]


def test_run_exit_codes(tmp_path, small_file):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["run", "--topology", str(bad), "--seed", "1", "--out", str(tmp_path / "o")]) == 4
    assert main(["run", "--topology", str(tmp_path / "missing.json"), "--seed", "1",
                 "--out", str(tmp_path / "o")]) == 4
    split = from_positions([(0, 0), (500, 500)], [1, 1], [1, 1], (1000, 1000), 100)
    f = write(tmp_path, "split.json", split)
    assert main(["run", "--topology", str(f), "--seed", "1", "--out", str(tmp_path / "o")]) == 3
    assert main(["run", "--topology", str(small_file), "--seed", "1", "--weights", "0.5,0.5,0.5",
                 "--out", str(tmp_path / "o")]) == 2
    with pytest.raises(SystemExit) as err:
        main(["run", "--topology", str(small_file), "--out", str(tmp_path / "o")])
    assert err.value.code == 2
    assert not (tmp_path / "o").exists()


def test_run_oracle_check_over_guard_exits_5(tmp_path):
    assert main(["run", "--seed", "8", "--gens", "2", "--oracle-check",
                 "--out", str(tmp_path / "o")]) == 5
    assert not (tmp_path / "o").exists()


def test_pareto_bundle(tmp_path, small_file):
    out = tmp_path / "p"
    assert main(["pareto", "--topology", str(small_file), "--seed", "2",
                 "--checkpoints", "50,100,200", "--oracle-check", "--out", str(out)]) == 0
    fronts = sorted(p.name for p in (out / "fronts").glob("gen_*.json"))
    assert fronts == ["gen_000050.json", "gen_000100.json", "gen_000200.json"]
    hv = [float(r["hypervolume"]) for r in rows(out / "hypervolume.csv")]
    assert hv == sorted(hv)
    snap = json.loads((out / "fronts" / "gen_000200.json").read_text())
    assert snap["reference_point"] == [51.0, 2.0, 11.0]
    keys = [(e["delay_ms"], e["hops"], e["path"]) for e in snap["entries"]]
    assert keys == sorted(keys)
    diff = json.loads((out / "fronts" / "oracle_diff.json").read_text())
    assert diff["equal"] is True


def test_sweep_dataset(tmp_path, small_file):
    out = tmp_path / "s"
    assert main(["sweep", "--topology", str(small_file), "--seed", "2", "--samples", "4",
                 "--gens", "30", "--nsga-gens", "40", "--out", str(out)]) == 0
    data = rows(out / "sweep.csv")
    tags = [r["tag"] for r in data]
    assert tags[0] == "fixed-weights"
    assert tags[1:4] == ["random-weights"] * 3
    assert set(tags[4:]) == {"pareto-archive"}
    assert (data[0]["alpha1"], data[0]["alpha2"], data[0]["alpha3"]) == ("0.5", "0.15", "0.35")


def test_sweep_rejects_zero_samples(tmp_path, small_file):
    assert main(["sweep", "--topology", str(small_file), "--seed", "2", "--samples", "0",
                 "--out", str(tmp_path / "s")]) == 2


def test_oracle_command(tmp_path, capsys):
    tri = from_positions([(0, 0), (100, 0), (50, 80)], [1, 1, 1], [1, 1, 1], (1000, 1000), 100)
    k4 = from_positions([(0, 0), (100, 0), (0, 100), (100, 100)], [1] * 4, [1] * 4,
                        (1000, 1000), 200)
    assert main(["oracle", "--topology", str(write(tmp_path, "tri.json", tri))]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [p["path"] for p in doc["paths"]] == [[1, 2, 3], [1, 3]]
    assert main(["oracle", "--topology", str(write(tmp_path, "k4.json", k4)),
                 "--out", str(tmp_path / "o")]) == 0
    doc = json.loads((tmp_path / "o" / "oracle.json").read_text())
    assert len(doc["paths"]) == 5
    assert doc["dijkstra_delay"]["path"] == [1, 4]


def test_oracle_guard_exit_5(tmp_path):
    big = tmp_path / "big.json"
    assert main(["gen", "--seed", "1", "--out", str(big)]) == 0
    assert main(["oracle", "--topology", str(big)]) == 5


def test_manifest_replay_reproduces_bundle(tmp_path, small_file):
    first = tmp_path / "first"
    assert main(["pareto", "--topology", str(small_file), "--seed", "5",
                 "--checkpoints", "20,40", "--out", str(first)]) == 0
    replay = tmp_path / "replay"
    assert main(["pareto", "--manifest", str(first / "manifest.json"), "--out", str(replay)]) == 0
    assert bundle_digest(first) == bundle_digest(replay)


def test_same_flags_same_bytes(tmp_path, small_file):
    digests = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["run", "--topology", str(small_file), "--seed", "9", "--gens", "20",
                     "--bandwidth-rule", "bottleneck-min", "--out", str(out)]) == 0
        digests.append(bundle_digest(out))
    assert digests[0] == digests[1]
