import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from ohhcsim import cli
from ohhcsim.partition import read_array


def invoke(*argv, capsys=None):
    return cli.main(list(argv))


def test_run_json_report(tmp_path):
    out = tmp_path / "report.json"
    rc = invoke(
        "run", "--dimension", "1", "--mode", "full", "--dist", "sorted",
        "--count", "100000", "--seed", "7", "--out", str(out),
    )
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["schema_version"] == 1
    assert report["simulation"]["comm_steps_total"] == 70
    assert report["simulation"]["gather_units_at_master"] == 36
    assert report["checks"]["output_matches_baseline"] is True
    assert report["checks"]["comm_steps_match_closed_form"] is True
    assert report["config"]["dist"] == "sorted"
    assert report["topology"]["group_diameter"] == 2


def test_run_deterministic_bytes(tmp_path):
    args = [
        "run", "--dimension", "1", "--dist", "random",
        "--count", "20000", "--seed", "5",
    ]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert invoke(*args, "--out", str(a)) == 0
    assert invoke(*args, "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_csv_format(tmp_path):
    out = tmp_path / "row.csv"
    rc = invoke(
        "run", "--dimension", "2", "--mode", "half", "--dist", "local",
        "--count", "5000", "--seed", "1", "--format", "csv", "--out", str(out),
    )
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1
    row = rows[0]
    assert row["status"] == "ok"
    assert row["comm_steps"] == "142"
    assert set(cli.SWEEP_COLUMNS) == set(row)


def test_run_trace_file(tmp_path):
    trace = tmp_path / "trace.csv"
    out = tmp_path / "r.json"
    rc = invoke(
        "run", "--dimension", "1", "--dist", "random", "--count", "500",
        "--seed", "3", "--trace", str(trace), "--out", str(out),
    )
    assert rc == 0
    lines = trace.read_text().strip().split("\n")
    report = json.loads(out.read_text())
    assert len(lines) == report["simulation"]["message_count"]
    assert all(len(line.split(",")) == 6 for line in lines)


def test_dimension_zero_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        invoke("run", "--dimension", "0", "--count", "10")
    assert exc.value.code == 2


def test_count_required_without_input(capsys):
    rc = invoke("run", "--dimension", "1")
    assert rc == 2


def test_run_from_input_file(tmp_path):
    data = tmp_path / "input.txt"
    data.write_text("".join(f"{v}\n" for v in [9, 1, 5, 3, 7, 2]))
    out = tmp_path / "r.json"
    rc = invoke("run", "--dimension", "1", "--input", str(data), "--out", str(out))
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["config"]["count"] == 6
    assert report["config"]["dist"] is None
    assert report["checks"]["output_matches_baseline"] is True


def test_measure_engine_adds_wall_clock(tmp_path):
    out = tmp_path / "m.json"
    rc = invoke(
        "run", "--dimension", "1", "--dist", "random", "--count", "20000",
        "--seed", "2", "--engine", "measure", "--out", str(out),
    )
    assert rc == 0
    report = json.loads(out.read_text())
    assert report["wall_clock"]["baseline_seconds"] > 0
    assert report["wall_clock"]["bucket_sort_seconds"] > 0
    assert report["checks"]["output_matches_baseline"] is True


def test_gen_and_read_back(tmp_path):
    out = tmp_path / "values.bin"
    rc = invoke("gen", "--dist", "sorted", "--count", "1000", "--seed", "4", "--out", str(out))
    assert rc == 0
    arr = read_array(out)
    assert arr.size == 1000
    assert np.all(np.diff(arr) >= 0)


def test_topology_export(tmp_path):
    out = tmp_path / "edges.txt"
    rc = invoke("topology", "--dimension", "1", "--mode", "half", "--out", str(out))
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    kinds = {line.split()[0] for line in lines}
    assert kinds == {"E", "O"}
    assert len(lines) == 9 * 3 + 3  # 9 cell edges per group, 3 optical pairs


def test_sweep_matrix_row_count(tmp_path):
    out = tmp_path / "sweep.csv"
    rc = invoke(
        "sweep", "--counts", "10,20,30,40,50,60", "--seed", "1", "--out", str(out),
    )
    assert rc == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4 * 2 * 4 * 6
    assert all(r["status"] == "ok" for r in rows)
    # Rows are self-describing: config columns fully populated.
    assert {r["dimension"] for r in rows} == {"1", "2", "3", "4"}
    assert {r["mode"] for r in rows} == {"full", "half"}
    assert {r["dist"] for r in rows} == {"random", "sorted", "reversed", "local"}


def test_sweep_partial_failure_marked(tmp_path, monkeypatch):
    out = tmp_path / "sweep.csv"
    calls = {"n": 0}
    original = cli._execute_cell

    def flaky(cfg, trace_path, baseline):
        calls["n"] += 1
        if calls["n"] == 2:
            raise RuntimeError("boom")
        return original(cfg, trace_path, baseline)

    monkeypatch.setattr(cli, "_execute_cell", flaky)
    rc = invoke("sweep", "--counts", "50", "--dimensions", "1", "--modes", "full",
                "--dists", "random,sorted,reversed", "--out", str(out))
    assert rc == 1
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 3
    statuses = [r["status"] for r in rows]
    assert statuses.count("ok") == 2
    assert any(s.startswith("error: boom") for s in statuses)


def test_out_dir_env_var(tmp_path, monkeypatch):
    monkeypatch.setenv("OHHCSIM_OUT_DIR", str(tmp_path / "reports"))
    rc = invoke("run", "--dimension", "1", "--dist", "random", "--count", "100",
                "--seed", "1", "--out", "nested/r.json")
    assert rc == 0
    assert (tmp_path / "reports" / "nested" / "r.json").exists()


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ohhcsim.cli", "run", "--dimension", "1",
         "--dist", "random", "--count", "200", "--seed", "9"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["simulation"]["comm_steps_total"] == 70


def test_stdout_output(capsys):
    rc = invoke("run", "--dimension", "1", "--dist", "random", "--count", "100", "--seed", "1")
    assert rc == 0
    report = json.loads(capsys.readouterr().out)
    assert report["schema_version"] == 1
