import json
import subprocess
import sys

import pytest

from refbit.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_distribution_csv(capsys):
    code, out, _ = run(capsys, "distribution", "--n", "2", "--twice-j", "1", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["twice_j,weight", "0,0.25", "2,0.75"]


def test_multiplicity_json(capsys):
    code, out, _ = run(capsys, "multiplicity", "--n", "8", "--twice-j", "1")
    rec = json.loads(out)
    assert rec["command"] == "multiplicity"
    assert rec["results"] == {
        "copies": 8,
        "twice_base": 1,
        "entries": {"0": "14", "2": "28", "4": "20", "6": "7", "8": "1"},
    }
    assert rec["metadata"]["version"]


def test_fidelity_json_schema(capsys):
    code, out, _ = run(capsys, "fidelity", "prob-filter", "--n", "2", "--twice-j", "2", "--m", "2", "--twice-k", "1")
    res = json.loads(out)["results"]
    assert res == {"value": 1.0, "method": "prob_filter", "success_probability": 0.444444444444, "clamped": False, "argmax_l": None}


@pytest.mark.parametrize(
    "method,expected",
    [("single-copy", 0.75), ("prob-opt", 0.75), ("det-upper", 1.0), ("mp-asym", None)],
)
def test_fidelity_methods(capsys, method, expected):
    args = ["fidelity", method, "--n", "1", "--twice-j", "2", "--m", "1", "--twice-k", "1"]
    if method == "mp-asym":
        args = ["fidelity", method, "--n", "400", "--twice-k", "2"]
        expected = 0.994375
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert json.loads(out)["results"]["value"] == pytest.approx(expected)


def test_output_is_deterministic(capsys, tmp_path):
    args = ["fidelity", "det-iso", "--n", "3", "--twice-j", "2", "--m", "8", "--twice-k", "1"]
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    assert json.loads(first)["results"]["value"] == 0.958149360586
    path = tmp_path / "r.json"
    run(capsys, *args, "--out", str(path))
    assert path.read_text() == first


def test_argument_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["fidelity", "det-iso", "--n", "3", "--twice-j", "2", "--m", "2", "--twice-k", "1"])
    assert e.value.code == 2
    assert "usage" in capsys.readouterr().err
    with pytest.raises(SystemExit) as e:
        main(["multiplicity", "--n", "-1", "--twice-j", "1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["fidelity", "prob-opt", "--n", "1"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 2


def test_bounds_and_gate(capsys):
    _, out, _ = run(capsys, "bounds", "success-prob", "--n", "20", "--twice-j", "1", "--twice-k", "1", "--ratio", "2", "--format", "csv")
    assert out.splitlines()[1] == "value,0.0190577920573"
    _, out, _ = run(capsys, "bounds", "gate", "--n", "1", "--twice-j", "2", "--m", "1", "--twice-k", "1")
    assert json.loads(out)["results"] == {"lower": 0.5625, "upper": 0.75}
    _, out, _ = run(capsys, "gate", "charge-conj", "--d", "2")
    assert json.loads(out)["results"]["value"] == 1.0
    _, out, _ = run(capsys, "gate", "cloning", "--d", "2")
    assert json.loads(out)["results"]["probabilistic"] == 0.5


def test_gate_general_file(capsys, tmp_path):
    from refbit.gate import cloning_rep_data

    path = tmp_path / "rep.json"
    path.write_text(json.dumps(cloning_rep_data(3).to_json()))
    _, out, _ = run(capsys, "gate", "general", "--file", str(path))
    res = json.loads(out)["results"]
    assert res["value"] == pytest.approx(2 / 9) and res["argmax"] == "U" and res["memoryless"] is False


def test_scan(capsys):
    _, out, _ = run(capsys, "scan", "two-copy", "--twice-j", "40", "--alpha-min", "2", "--alpha-max", "2.5", "--steps", "3")
    res = json.loads(out)["results"]
    assert [p["m"] for p in res["points"]] == [800, 900, 1000]


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--case", "povm_completeness:n=2", "--seed", "3")
    assert code == 0
    rec = json.loads(out)
    assert rec["metadata"]["seed"] == 3
    assert rec["results"][0]["pass"] is True
    code, _, err = run(capsys, "verify", "--case", "isometry:1/2->1", "--tolerance", "1e-30")
    assert code == 1 and "isometry" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "refbit", "gate", "su2", "--twice-j", "2", "--twice-k", "1", "--format", "csv"], capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.splitlines() == ["quantity,value", "value,0.75"]
