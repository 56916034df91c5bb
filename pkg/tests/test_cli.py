import json

import numpy as np

from phaselab.cli import main


def test_check_potential_quartic_exits_zero(capsys):
    assert main(["check-potential", "--kind", "quartic"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 4


def test_check_potential_failing_table_exits_one(tmp_path, capsys):
    xs = np.linspace(-2, 2, 501)
    table = [[float(x), float(x * x)] for x in xs]
    path = tmp_path / "table.json"
    path.write_text(json.dumps(table))
    assert main(["check-potential", "--kind", "table", "--table-file", str(path)]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_solve_model_trivial_zero_exits_zero(capsys):
    rc = main(["solve-model", "--l", "1.5707963", "--eps", "2.0", "--json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "trivial_zero"


def test_unknown_flag_exits_two():
    assert main(["check-potential", "--bogus"]) == 2


def test_unknown_command_exits_two():
    assert main(["frobnicate"]) == 2


def test_m_rigidity_odd_m_exits_two(capsys):
    rc = main(["experiment", "m-rigidity", "--m", "3"])
    assert rc == 2
    assert "even" in capsys.readouterr().err


def test_build_circle_odd_m_exits_two():
    assert main(["build-circle", "--m", "3", "--eps", "0.15"]) == 2


def test_threshold_json(capsys):
    rc = main(["threshold", "--l", "0.7853981633974483", "--json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert abs(payload["threshold"] - 0.5) <= 0.01


def test_build_analyze_refine_flow_pipeline(tmp_path, capsys):
    snap = tmp_path / "m2.snap"
    rc = main(
        ["build-circle", "--m", "2", "--eps", "0.2", "--grid-n", "512", "--out", str(snap)]
    )
    assert rc == 0
    assert snap.exists()
    capsys.readouterr()

    rc = main(
        [
            "analyze",
            "--snapshot",
            str(snap),
            "--what",
            "nodal",
            "congruence",
            "alternation",
            "symmetry",
            "--m",
            "2",
            "--json",
        ]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["nodal_count"] == 2
    assert payload["congruence"]["passed"]
    assert payload["alternation"] is True
    assert payload["symmetry"]["passed"]

    out2 = tmp_path / "refined.snap"
    assert main(["refine", "--snapshot", str(snap), "--out", str(out2), "--json"]) == 0
    capsys.readouterr()

    trace = tmp_path / "trace.csv"
    rc = main(
        [
            "flow",
            "--snapshot",
            str(out2),
            "--steps",
            "50",
            "--out",
            str(tmp_path / "flowed.snap"),
            "--trace",
            str(trace),
        ]
    )
    assert rc == 0
    assert trace.read_text().startswith("step,energy")


def test_experiment_comparison_cli(tmp_path, capsys):
    out = tmp_path / "report.json"
    csv = tmp_path / "census.csv"
    rc = main(
        ["experiment", "comparison", "--out", str(out), "--csv", str(csv), "--json"]
    )
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True
    assert json.loads(out.read_text())["experiment"] == "comparison_principle"
    assert csv.exists()


def test_sweep_two_interface(tmp_path):
    csv = tmp_path / "sweep.csv"
    rc = main(
        [
            "sweep",
            "--experiment",
            "two-interface",
            "--eps",
            "0.25",
            "--seeds",
            "2",
            "--grid-n",
            "256",
            "--csv",
            str(csv),
        ]
    )
    assert rc == 0
    lines = csv.read_text().splitlines()
    assert len(lines) == 3
    assert "outcome" in lines[0].split(",")
