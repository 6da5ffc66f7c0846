import csv
import io
import json
import subprocess
import sys

import pytest

from uavecon import harness as H
from uavecon.cli import main
from uavecon.deployment import Fleet, UavSpec, minmax_general, minsum_dp

SMALL = dict(n_range=(3, 6), trials=3, mech_profiles=5)


def run_cli(*argv):
    return subprocess.run([sys.executable, "-m", "uavecon", *argv], capture_output=True, text=True)


# ---------------------------------------------------------------------------
# scenario generation


def test_zero_spread_gives_mean_parameters():
    cfg = H.ScenarioConfig(spread=0.0)
    fleet = H.generate_fleet(cfg, 4, 0)
    assert all((u.v, u.r, u.h) == (40.0, 2.0, 5.0) for u in fleet.uavs)


def test_fleet_generation_is_deterministic_and_sorted():
    cfg = H.ScenarioConfig(seed=9)
    a, b = H.generate_fleet(cfg, 7, 3), H.generate_fleet(cfg, 7, 3)
    assert a == b
    assert H.generate_fleet(cfg, 7, 4) != a
    xs = [u.x0 for u in a.uavs]
    assert xs == sorted(xs) and all(0 <= x <= cfg.beta for x in xs)
    for u in a.uavs:
        assert 30 <= u.v <= 50 and 1.5 <= u.r <= 2.5 and 3.75 <= u.h <= 6.25


def test_config_validation_and_roundtrip(tmp_path):
    for bad in (dict(spread=1.0), dict(mean_speed=0), dict(n_range=(0,)), dict(trials=0)):
        with pytest.raises(ValueError):
            H.ScenarioConfig(**bad)
    with pytest.raises(ValueError):
        H.ScenarioConfig.from_dict({"nope": 1})
    cfg = H.ScenarioConfig(seed=3, n_range=(2, 4), delta=0.1)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert H.load_config(path) == cfg


def test_generate_fleet_rejects_empty():
    with pytest.raises(ValueError):
        H.generate_fleet(H.ScenarioConfig(), 0, 0)


def test_infeasible_fleets_are_flagged():
    # two 1.1 km footprints can never span 10 km
    cfg = H.ScenarioConfig(n_range=(2,), trials=2, mean_radius=0.5, spread=0.1)
    records = H.run_tradeoff_experiment(cfg)
    assert len(records) == 4 and not any(r.feasible for r in records)
    assert H.summarize(records)[0]["trials"] == 0


# ---------------------------------------------------------------------------
# experiments


def test_tradeoff_records_structure():
    cfg = H.ScenarioConfig(**SMALL)
    records = H.run_tradeoff_experiment(cfg)
    assert len(records) == 2 * 3 * 2
    assert [(r.n, r.objective, r.trial) for r in records] == sorted((r.n, r.objective, r.trial) for r in records)
    rows = H.summarize(records)
    assert [(r["n"], r["objective"]) for r in rows] == [(3, "minmax"), (3, "minsum"), (6, "minmax"), (6, "minsum")]


def test_energy_scales_with_lengths():
    # doubling every length doubles flight time under constant power
    fleet = H.generate_fleet(H.ScenarioConfig(), 6, 0)
    big = Fleet(tuple(UavSpec(2 * u.x0, 2 * u.h, u.v, 2 * u.r, u.power) for u in fleet.uavs), 2 * fleet.beta)
    fast = Fleet(tuple(UavSpec(2 * u.x0, 2 * u.h, 2 * u.v, 2 * u.r, u.power) for u in fleet.uavs), 2 * fleet.beta)
    base = minsum_dp(fleet).total_energy
    assert minsum_dp(big).total_energy == pytest.approx(2 * base, rel=1e-9)
    assert minsum_dp(fast).total_energy == pytest.approx(base, rel=1e-9)
    assert minmax_general(big, 0.01).max_energy == pytest.approx(2 * minmax_general(fleet, 0.01).max_energy, rel=1e-9)


def test_mechanism_suite_report():
    rep = H.run_mechanism_suite(H.ScenarioConfig(mech_profiles=10))
    assert rep["fuzz"]["mechanism1"]["violations"] == 0
    assert rep["fuzz"]["mechanism2"]["violations"] == 0
    assert len(rep["counterexamples"]["weighted_mean"]["violations"]) >= 1
    assert len(rep["counterexamples"]["optimal_vertex"]["violations"]) >= 1
    assert rep["ratios"]["mechanism1"]["count"] == 10
    json.dumps(rep)


# ---------------------------------------------------------------------------
# emission


def test_empty_csv_is_header_only(tmp_path):
    path = tmp_path / "out.csv"
    H.emit_results([], "csv", path)
    assert path.read_text() == "n,objective,mean_max_energy,mean_total_energy,trials,seed\n"


def test_csv_rows_and_precision(tmp_path):
    cfg = H.ScenarioConfig(**SMALL)
    records = H.run_tradeoff_experiment(cfg)
    path = tmp_path / "out.csv"
    H.emit_results(records, "csv", path)
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert len(rows) == len(cfg.n_range) * 2
    for row in rows:
        digits = row["mean_max_energy"].replace(".", "").lstrip("0")
        assert len(digits.split("e")[0]) <= 9
        assert row["seed"] == "42" and row["trials"] == "3"


def test_json_roundtrip_is_exact(tmp_path):
    records = H.run_tradeoff_experiment(H.ScenarioConfig(**SMALL))
    path = tmp_path / "out.json"
    H.emit_results(records, "json", path)
    assert H.parse_records_json(path.read_text()) == records


def test_emit_errors_name_the_path(tmp_path):
    bad = tmp_path / "missing" / "out.csv"
    with pytest.raises(OSError, match="missing"):
        H.emit_results([], "csv", bad)
    with pytest.raises(ValueError):
        H.emit_results([], "xml", tmp_path / "x")


# ---------------------------------------------------------------------------
# command line


@pytest.fixture
def fleet_file(tmp_path):
    path = tmp_path / "fleet.json"
    path.write_text(json.dumps({"beta": 4, "uavs": [{"x0": 0, "h": 3, "v": 1, "r": 2}]}))
    return path


def test_cli_deploy_minmax(fleet_file, capsys):
    assert main(["deploy", "minmax", "--fleet", str(fleet_file)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["uavs"][0]["x_final"] == 2.0 and out["covered"]


def test_cli_deploy_minsum_csv(fleet_file, capsys):
    assert main(["deploy", "minsum", "--fleet", str(fleet_file), "--format", "csv"]) == 0
    assert capsys.readouterr().out.splitlines() == ["uav,x0,position,energy", "0,0,2,3.60555128"]


def test_cli_exit_codes(tmp_path, fleet_file):
    short = tmp_path / "short.json"
    short.write_text(json.dumps({"beta": 10, "uavs": [{"x0": 0, "h": 3, "v": 1, "r": 2}]}))
    assert main(["deploy", "oracle", "--fleet", str(short)]) == 1
    assert main(["deploy", "minsum", "--fleet", str(tmp_path / "absent.json")]) == 2
    garbled = tmp_path / "garbled.json"
    garbled.write_text("{not json")
    assert main(["deploy", "minmax", "--fleet", str(garbled)]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["deploy", "teleport"])
    assert exc.value.code == 2


def test_cli_place_solve(tmp_path, capsys):
    path = tmp_path / "profile.json"
    path.write_text(json.dumps({"domain": {"A": 2, "B": 1, "C": 1}, "kind": "facility",
                                "users": [{"x": 0, "y": 0, "z": 0, "w": 1}, {"x": 2, "y": 0, "z": 0, "w": 1}]}))
    assert main(["place", "solve", "--profile", str(path), "--mechanism", "mechanism1"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["location"] == [0.0, 0.0, 0.0] and out["social_value"] == 4.0


def test_cli_place_fuzz(capsys):
    assert main(["place", "fuzz", "--profiles", "5", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["violations"] == []


def test_cli_patrol_commands(tmp_path, capsys):
    assert main(["patrol", "compare", "--L", "10", "--deltaL", "2.5", "--n", "5", "--D", "2",
                 "--power", '{"kind": "affine_quadratic", "a": 1, "b": 0.5}']) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["best"] == "cyclic" and out["schemes"]["cyclic"]["speed"] == 1.0

    graph = tmp_path / "g.json"
    assert main(["patrol", "build-graph", "--rows", "1", "--cols", "2", "--side", "1", "--out", str(graph)]) == 0
    assert main(["patrol", "tour", "--graph", str(graph)]) == 0
    assert json.loads(capsys.readouterr().out)["length"] == 12.0
    assert main(["patrol", "split", "--rows", "1", "--cols", "1", "--k", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["split"]["max_length"] == 6.0
    assert main(["patrol", "tour"]) == 2


def test_cli_experiment_seed_flag_anywhere(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(dict(n_range=[3], trials=2)))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["--seed", "5", "experiment", "tradeoff", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["experiment", "tradeoff", "--config", str(cfg), "--seed", "5", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[1].endswith(",5")


def test_cli_module_entry_point(tmp_path):
    res = run_cli("patrol", "build-graph", "--rows", "1", "--cols", "1")
    assert res.returncode == 0 and len(json.loads(res.stdout)["edges"]) == 6
    res = run_cli("experiment", "mechanisms", "--format", "csv")
    assert res.returncode == 2 and "only emits JSON" in res.stderr
