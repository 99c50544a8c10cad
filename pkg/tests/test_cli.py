import json

import numpy as np
import pytest

from chargesweep.cli import main
from chargesweep.generate import ExperimentSpec, SpecError, generate
from chargesweep.instance import Instance, load, save
from chargesweep.routes import Schedule


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def instance_file(tmp_path):
    inst = Instance.from_coordinates([(1, 1), (2, 3), (8, 8)], [(0, 0), (9, 9)], speed=1.0,
                                     sweep_period=10.0, charge_period=20.0, sensors=2)
    path = tmp_path / "inst.json"
    path.write_bytes(save(inst))
    return path


def test_spec_validation():
    for bad in (dict(n_range=(0, 3)), dict(m_range=(3, 2)), dict(chargers=3),
                dict(variant="x"), dict(variant="csc2", chargers=1),
                dict(sweep_period=10, charge_period=15)):
        with pytest.raises(SpecError):
            ExperimentSpec(**bad)
    with pytest.raises(SpecError):
        ExperimentSpec.from_dict({"bogus": 1})
    spec = ExperimentSpec.from_dict({"n_range": [2, 3], "seeds": 2})
    assert ExperimentSpec.from_dict(spec.to_dict()) == spec


def test_generate_is_deterministic():
    spec = ExperimentSpec(seeds=3, base_seed=9)
    a, b = generate(spec), generate(spec)
    assert [n for n, _ in a] == ["inst_9_0000", "inst_9_0001", "inst_9_0002"]
    assert all(x == y for (_, x), (_, y) in zip(a, b))


def test_gen_writes_identical_files(tmp_path, capsys):
    for sub in ("a", "b"):
        code, out, _ = run(capsys, "gen", "--count", 3, "--seed", 4, "--n", 2, 5,
                           "--out", tmp_path / sub)
        assert code == 0 and len(out.split()) == 3
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
        inst = load(f.read_bytes())
        assert 2 <= inst.n_targets <= 5


def test_solve_verify_render(instance_file, tmp_path, capsys):
    code, out, _ = run(capsys, "solve", instance_file, "--out", tmp_path)
    assert code == 0 and out.startswith("rcsc_tc_ge_tt: covered")
    sched_path = tmp_path / "inst.schedule.json"
    report = json.loads((tmp_path / "inst.report.json").read_text())
    assert report["feasible"]

    code, out, _ = run(capsys, "verify", instance_file, sched_path)
    assert code == 0 and json.loads(out) == report

    code, svg1, _ = run(capsys, "render", instance_file, sched_path)
    code2, svg2, _ = run(capsys, "render", instance_file, sched_path)
    assert code == code2 == 0 and svg1 == svg2
    assert svg1.startswith("<svg") and "#1f77b4" in svg1
    n_sensors = len(Schedule.loads(sched_path.read_bytes()).itineraries)
    assert svg1.count("<polyline") == n_sensors


def test_verify_flags_infeasible_schedule(instance_file, tmp_path, capsys):
    run(capsys, "solve", instance_file, "--out", tmp_path)
    doc = json.loads((tmp_path / "inst.schedule.json").read_text())
    doc["covered"] = [0, 1, 2]
    for it in doc["itineraries"]:
        it["phase"] = 0.0
    doc["itineraries"] *= 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "verify", instance_file, bad)
    assert code == 3 and not json.loads(out)["feasible"]


def test_render_needs_coordinates(tmp_path, capsys):
    d = np.array([[0, 1], [1, 0]], dtype=float)
    inst = Instance.from_matrix(d, 1, speed=1, sweep_period=1, charge_period=1, sensors=1)
    ipath = tmp_path / "m.json"
    ipath.write_bytes(save(inst))
    code, _, _ = run(capsys, "solve", ipath, "--out", tmp_path)
    assert code == 0
    code, _, err = run(capsys, "render", ipath, tmp_path / "m.schedule.json")
    assert code == 2 and "coordinates" in err


def test_input_errors_exit_2(tmp_path, capsys):
    missing = tmp_path / "none.json"
    assert run(capsys, "solve", missing)[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    code, _, err = run(capsys, "solve", broken)
    assert code == 2 and "malformed" in err
    assert run(capsys, "gen", "--tt", 10, "--tc", 15, "--out", tmp_path)[0] == 2


def test_exact_limit_hint(tmp_path, capsys):
    rng = np.random.default_rng(1)
    inst = Instance.from_coordinates(rng.uniform(0, 2, (6, 2)), [(1, 1)], speed=1,
                                     sweep_period=10, charge_period=10, sensors=1)
    path = tmp_path / "dense.json"
    path.write_bytes(save(inst))
    code, _, err = run(capsys, "solve", path, "--exact-limit", 3, "--out", tmp_path)
    assert code == 2 and "--kernel heuristic" in err
    code, _, _ = run(capsys, "solve", path, "--kernel", "heuristic", "--out", tmp_path)
    assert code == 0


def test_certify_empty_and_small(tmp_path, capsys):
    code, out, err = run(capsys, "certify", "--count", 0)
    assert code == 0 and out.splitlines() == [
        "instance_id,variant,N,K,M,Q_or_Qhat,greedy,opt_R,opt_true,bound,ratio_R,"
        "ratio_true,pass"]
    assert json.loads(err)["rows"] == 0
    code, _, err = run(capsys, "certify", "--count", 3, "--n", 2, 4, "--tt", 20, "--tc", 10,
                       "--out", tmp_path)
    assert code in (0, 3)
    rows = (tmp_path / "certify.csv").read_text().splitlines()
    assert len(rows) == 4 and all(",rcsc_tt_gt_tc," in r for r in rows[1:])


def test_bound_command(capsys):
    code, out, _ = run(capsys, "bound", "rcsc_tc_ge_tt", 2)
    assert code == 0 and out.strip() == "0.632121"
    code, out, _ = run(capsys, "bound", "csc2_tt_gt_tc", 2, "--gamma", 0.4)
    assert out.strip() == f"{1 - np.exp(-2 * 0.36 / 3):.6f}"
    assert run(capsys, "bound", "rcsc_tc_ge_tt", 0)[0] == 2
