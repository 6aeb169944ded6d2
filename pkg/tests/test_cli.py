"""End-to-end coverage of the command-line surface: parsing, reports,
exit codes, and determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from weakvalues import cli

HALF_SQRT3 = np.sqrt(3.0) / 2.0


def _write_problem(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture()
def great_circle_file(tmp_path):
    return _write_problem(tmp_path / "great_circle.json", {
        "dimension": 2,
        "observable": [[1.0, 0.0], [0.0, 0.0]],
        "pre_state": [0.5, HALF_SQRT3],
        "post_state": [-0.5, HALF_SQRT3],
    })


@pytest.fixture()
def coherent_mixed_file(tmp_path):
    c_psi = float(np.sqrt(3.0 / 32.0))
    c_phi = float(np.sqrt(3.0) / 8.0)
    return _write_problem(tmp_path / "coherent_mixed.json", {
        "dimension": 2,
        "observable": [[0.0, 0.0], [0.0, 1.0]],
        "pre_state": [[0.75, c_psi], [c_psi, 0.25]],
        "post_state": [[0.75, c_phi], [c_phi, 0.25]],
    })


def _run(capsys, argv):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compute_flags_anomaly(capsys, great_circle_file):
    code, out, err = _run(capsys, ["compute", "--input", great_circle_file])
    assert code == 3
    report = json.loads(out)
    assert abs(report["weak_value"]["re"] - (-0.5)) < 1e-12
    assert report["weak_value"]["im"] == 0.0
    assert report["weak_value"]["classification"] == "AnomalousReal"
    assert report["weak_value"]["marginal"] is False
    assert report["quasiprob"]["anomalous_indices"] == [0, 1]
    assert report["witness"]["verdict"] == "ConsistentWithTheorem"
    assert report["cycles"]["fragment"]["claim_applies"] is True
    assert abs(report["cycles"]["fragment"]["max_value"] - 1.25) < 1e-12
    assert report["tool"]["name"] == "weakvalues"


def test_compute_tame_case(capsys, coherent_mixed_file):
    code, out, err = _run(capsys, ["compute", "--input", coherent_mixed_file])
    assert code == 0
    report = json.loads(out)
    g = report["quasiprob"]["weights"]
    assert abs(g[0][0] - 0.829997) < 5e-6
    assert abs(g[1][0] - 0.170003) < 5e-6
    assert report["quasiprob"]["anomalous_indices"] == []
    assert report["witness"]["commutator_norm"] > 0.0


def test_tol_anom_override_suppresses_anomaly(capsys, great_circle_file):
    code, out, _ = _run(capsys, ["compute", "--input", great_circle_file,
                                 "--tol-anom", "10"])
    assert code == 0
    report = json.loads(out)
    assert report["weak_value"]["classification"] == "Normal"
    assert report["inputs"]["tolerances"]["anom"] == 10.0


def test_gvals_and_witness_subcommands(capsys, great_circle_file):
    code, out, _ = _run(capsys, ["gvals", "--input", great_circle_file])
    assert code == 3
    report = json.loads(out)
    assert abs(report["quasiprob"]["weights"][0][0] - 1.5) < 1e-12
    assert "weak_value" not in report

    code, out, _ = _run(capsys, ["witness", "--input", great_circle_file])
    assert code == 3
    report = json.loads(out)
    assert report["witness"]["coherent_pre"] is True
    assert report["witness"]["coherent_post"] is True


def test_contextuality_qutrit_omits_fragment(capsys, tmp_path):
    path = _write_problem(tmp_path / "qutrit.json", {
        "dimension": 3,
        "observable": [[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 2.0]],
        "pre_state": [0.6, 0.0, 0.8],
        "post_state": [0.8, 0.0, 0.6],
    })
    code, out, _ = _run(capsys, ["contextuality", "--input", path])
    report = json.loads(out)
    assert "fragment" not in report["cycles"]
    assert "dimension 3" in report["cycles"]["fragment_note"]
    assert len(report["cycles"]["inequalities"]) == 30  # C(5,3) * 3


def test_pointer_subcommand(capsys, great_circle_file):
    code, out, _ = _run(capsys, ["pointer", "--input", great_circle_file])
    assert code == 3
    report = json.loads(out)
    extra = report["pointer"]["extrapolation"]
    assert abs(extra["value"][0] - (-0.5)) < 1e-6
    assert extra["classification"] == "AnomalousReal"
    rows = report["pointer"]["series"]
    assert len(rows) == 4
    assert all("postselect_prob" in row for row in rows)


def test_pointer_rejects_mixed_states(capsys, coherent_mixed_file):
    code, _, err = _run(capsys, ["pointer", "--input", coherent_mixed_file])
    assert code == 1
    assert "needs pure states" in err


def test_exit_two_on_orthogonal_selection(capsys, tmp_path):
    path = _write_problem(tmp_path / "orthogonal.json", {
        "dimension": 2,
        "observable": [[1.0, 0.0], [0.0, 0.0]],
        "pre_state": [1.0, 0.0],
        "post_state": [0.0, 1.0],
    })
    code, _, err = _run(capsys, ["compute", "--input", path])
    assert code == 2
    assert "overlap" in err


def test_input_error_paths(capsys, tmp_path):
    code, _, err = _run(capsys, ["compute", "--input", str(tmp_path / "missing.json")])
    assert code == 1

    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    code, _, err = _run(capsys, ["compute", "--input", str(bad_json)])
    assert code == 1
    assert "invalid JSON" in err

    bad_norm = _write_problem(tmp_path / "badnorm.json", {
        "dimension": 2,
        "observable": [[1.0, 0.0], [0.0, 0.0]],
        "pre_state": [1.0, 1.0],
        "post_state": [1.0, 0.0],
    })
    code, _, err = _run(capsys, ["compute", "--input", bad_norm])
    assert code == 1
    assert "problem.pre_state" in err

    code, _, err = _run(capsys, ["compute", "--no-such-flag"])
    assert code == 1
    code, _, err = _run(capsys, ["no-such-command"])
    assert code == 1


def test_unknown_problem_keys_rejected(capsys, tmp_path):
    path = _write_problem(tmp_path / "extra.json", {
        "dimension": 2,
        "observable": [[1.0, 0.0], [0.0, 0.0]],
        "pre_state": [1.0, 0.0],
        "post_state": [1.0, 0.0],
        "surprise": 1,
    })
    code, _, err = _run(capsys, ["compute", "--input", path])
    assert code == 1
    assert "surprise" in err


def test_complex_entries_and_seed(capsys, tmp_path):
    inv = 1.0 / np.sqrt(2.0)
    path = _write_problem(tmp_path / "complex.json", {
        "dimension": 2,
        "observable": [[1.0, 0.0], [0.0, 0.0]],
        "pre_state": [[inv, 0.0], [0.0, inv]],
        "post_state": [[inv, 0.0], [inv, 0.0]],
        "seed": 77,
    })
    code, out, _ = _run(capsys, ["compute", "--input", path])
    report = json.loads(out)
    assert report["seed"] == 77
    # A_w = (1/2) / ((1 + i)/2) picks up an imaginary part
    assert report["weak_value"]["classification"] == "AnomalousImaginary"
    assert abs(report["weak_value"]["im"] - (-0.5)) < 1e-12
    assert code == 3


def test_grid_of_bare_numbers_prefers_matrix_reading(capsys, tmp_path):
    # [[a, b], [b, c]] at dimension 2 could be a matrix or a vector of
    # [re, im] pairs; the matrix reading wins, the vector reading is the
    # fallback when validation rejects the matrix
    as_matrix = _write_problem(tmp_path / "m.json", {
        "dimension": 2,
        "observable": [[0.0, 0.0], [0.0, 1.0]],
        "pre_state": [[0.75, 0.25], [0.25, 0.25]],
        "post_state": [[1.0, 0.0], [0.0, 0.0]],
    })
    code, out, _ = _run(capsys, ["gvals", "--input", as_matrix])
    report = json.loads(out)
    assert report["inputs"]["pre_state"][0][0] == [0.75, 0.0]

    inv = 1.0 / np.sqrt(2.0)
    as_vector = _write_problem(tmp_path / "v.json", {
        "dimension": 2,
        "observable": [[0.0, 0.0], [0.0, 1.0]],
        # trace 2/sqrt(2) != 1, so this only parses as (1, i)/sqrt(2)
        "pre_state": [[inv, 0.0], [0.0, inv]],
        "post_state": [1.0, 0.0],
    })
    code, out, _ = _run(capsys, ["gvals", "--input", as_vector])
    report = json.loads(out)
    pre = np.array([[complex(re, im) for re, im in row]
                    for row in report["inputs"]["pre_state"]])
    expected = np.array([[0.5, -0.5j], [0.5j, 0.5]])
    assert np.max(np.abs(pre - expected)) < 1e-12

    neither = _write_problem(tmp_path / "n.json", {
        "dimension": 2,
        "observable": [[0.0, 0.0], [0.0, 1.0]],
        "pre_state": [[0.9, 0.3], [0.3, 0.4]],
        "post_state": [1.0, 0.0],
    })
    code, _, err = _run(capsys, ["gvals", "--input", neither])
    assert code == 1
    assert "amplitude-vector reading fails as well" in err


def test_round_trip_echo(capsys, great_circle_file, tmp_path):
    code, out, _ = _run(capsys, ["compute", "--input", great_circle_file])
    first = json.loads(out)
    echoed = _write_problem(tmp_path / "echoed.json", first["inputs"])
    code, out, _ = _run(capsys, ["compute", "--input", echoed])
    second = json.loads(out)
    assert second["inputs"] == first["inputs"]
    assert second["weak_value"] == first["weak_value"]
    assert second["quasiprob"] == first["quasiprob"]


def test_csv_format(capsys, great_circle_file):
    code, out, _ = _run(capsys, ["compute", "--input", great_circle_file,
                                 "--format", "csv"])
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    keys = {line.split(",", 1)[0] for line in lines[1:]}
    assert "weak_value.re" in keys
    assert "quasiprob.weights.0.0" in keys
    assert "cycles.max_value" in keys


def test_search_reports_are_byte_identical(capsys):
    argv = ["search", "--observable", "proj0", "--budget", "1500", "--seed", "3"]
    _, out1, _ = _run(capsys, argv)
    _, out2, _ = _run(capsys, argv)
    _, out3, _ = _run(capsys, argv + ["--workers", "5"])
    assert out1 == out2 == out3
    report = json.loads(out1)
    assert report["search"]["best_value"] >= 0.4
    check = report["search"]["weak_value_at_best"]
    assert abs(check["re"] + report["search"]["best_value"]) < 1e-12
    assert check["classification"] != "Normal"


def test_scan_reports_are_byte_identical(capsys):
    argv = ["scan", "--kind", "haar", "--n", "300", "--seed", "9"]
    _, out1, _ = _run(capsys, argv)
    _, out2, _ = _run(capsys, argv + ["--workers", "6"])
    assert out1 == out2
    report = json.loads(out1)
    counts = report["scan"]["counts"]
    fractions = report["scan"]["fractions"]
    assert counts["anomalous_g"] > 0
    assert abs(fractions["anomalous_g"] - counts["anomalous_g"] / 300) < 1e-15
    assert "workers" not in json.dumps(report)


def test_scan_diagonal_is_anomaly_free(capsys):
    _, out, _ = _run(capsys, ["scan", "--kind", "diagonal", "--n", "200", "--seed", "4"])
    report = json.loads(out)
    assert report["scan"]["counts"]["anomalous_g"] == 0
    assert report["scan"]["counts"]["anomalous_aw"] == 0


def test_reproduce_all_pass(capsys):
    code, out, _ = _run(capsys, ["reproduce-paper"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "13/13 reference checks passed"
    assert all(line.startswith("PASS") for line in lines[:-1])
    assert len(lines) == 14


def test_reproduce_detects_drift(capsys, monkeypatch):
    broken = dict(cli.REFERENCE_VALUES)
    broken["pair_overlap"] = (0.26, 1e-12)
    monkeypatch.setattr(cli, "REFERENCE_VALUES", broken)
    code, out, _ = _run(capsys, ["reproduce-paper"])
    assert code == 4
    assert "FAIL pair_overlap" in out
    assert "12/13 reference checks passed" in out


def test_module_entry_point(tmp_path):
    problem = tmp_path / "p.json"
    problem.write_text(json.dumps({
        "dimension": 2,
        "observable": [[1.0, 0.0], [0.0, 0.0]],
        "pre_state": [0.5, HALF_SQRT3],
        "post_state": [-0.5, HALF_SQRT3],
    }))
    proc = subprocess.run([sys.executable, "-m", "weakvalues", "compute",
                           "--input", str(problem)],
                          capture_output=True, text=True)
    assert proc.returncode == 3
    assert abs(json.loads(proc.stdout)["weak_value"]["re"] - (-0.5)) < 1e-12

    proc = subprocess.run([sys.executable, "-m", "weakvalues", "reproduce-paper"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "13/13" in proc.stdout
