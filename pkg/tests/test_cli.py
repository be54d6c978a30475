"""Command-line surface: exit codes, JSON report shape, determinism.

Exit convention: 0 all checks pass, 1 at least one check fails, 2 usage or
input error. Commands run in-process through main(argv); one subprocess
smoke test covers the installed entry point.
"""

import json
import subprocess

import numpy as np
import pytest

from meanlab import HermitianMatrix, matrix_to_json
from meanlab.cli import main

SCHEMA = "meanlab-report/1"


@pytest.fixture
def matrix_file(tmp_path):
    def write(name, arr):
        path = tmp_path / name
        blob = matrix_to_json(HermitianMatrix(np.asarray(arr, dtype=complex)))
        path.write_text(json.dumps(blob))
        return str(path)

    return write


@pytest.fixture
def scalar_pair(matrix_file):
    return matrix_file("a.json", 2.0 * np.eye(2)), matrix_file(
        "b.json", 6.0 * np.eye(2)
    )


def run_json(capsys, argv):
    code = main(argv + ["--json"])
    payload = json.loads(capsys.readouterr().out)
    return code, payload


def test_mean_text_mode(capsys, scalar_pair):
    a, b = scalar_pair
    assert main(["mean", "--kind", "harmonic", "--a", a, "--b", b]) == 0
    out = capsys.readouterr().out
    assert out.startswith("meanlab mean")
    result = json.loads(out.splitlines()[1])
    assert result["mean"]["re"][0][0] == pytest.approx(3.0)


def test_mean_json_payload(capsys, scalar_pair):
    a, b = scalar_pair
    code, payload = run_json(
        capsys, ["mean", "--kind", "wasserstein", "--a", a, "--b", b]
    )
    assert code == 0
    assert payload["schema"] == SCHEMA
    assert payload["command"] == "mean"
    assert payload["all_pass"] is True
    assert "elapsed_ms" in payload
    names = [item["name"] for item in payload["checks"]]
    assert "two Wasserstein formulas agree" in names


def test_dbw_scalar_value(capsys, scalar_pair):
    a, b = scalar_pair
    assert main(["dbw", "--a", a, "--b", b]) == 0
    result = json.loads(capsys.readouterr().out.splitlines()[1])
    assert result["distance"] == pytest.approx(np.sqrt(12.0) - 2.0)


def test_geodesic_midpoint_checks(capsys, scalar_pair):
    a, b = scalar_pair
    code = main(
        ["geodesic", "--kind", "bw", "--a", a, "--b", b, "--t", "0.5",
         "--check-metric"]
    )
    assert code == 0


def test_expand_exits_one_while_tabulated_pins_fail(capsys):
    code, payload = run_json(capsys, ["expand", "--mean", "kubo-ando", "--p", "0.5"])
    assert code == 1
    assert payload["all_pass"] is False
    failing = [item for item in payload["checks"] if not item["passed"]]
    assert failing and all("tabulated" in item["name"] for item in failing)


def test_verify_single_criterion_green(capsys):
    code, payload = run_json(capsys, ["verify", "--criterion", "6"])
    assert code == 0
    assert payload["command"] == "verify"
    assert payload["all_pass"] is True


def test_verify_single_criterion_red(capsys):
    assert main(["verify", "--criterion", "3", "--json"]) == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["all_pass"] is False


def test_axioms_battery(capsys):
    code = main(["axioms", "--kind", "harmonic", "--samples", "25", "--dim", "2"])
    assert code == 0


def test_probe_reports_verdict_without_failing(capsys, matrix_file):
    a = matrix_file("nonscalar.json", np.diag([1.0, 4.0]))
    assert main(["centrality", "--kind", "harmonic", "--a", a, "--samples", "10"]) == 0
    result = json.loads(capsys.readouterr().out.splitlines()[1])
    assert result["central"] is False


def test_usage_error_on_unknown_kind(capsys, scalar_pair):
    a, b = scalar_pair
    assert main(["mean", "--kind", "nope", "--a", a, "--b", b]) == 2
    capsys.readouterr()


def test_input_error_on_missing_file(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    code = main(["dbw", "--a", missing, "--b", missing])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_input_error_on_malformed_matrix(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"re": [[1.0]]}')
    code = main(["dbw", "--a", str(bad), "--b", str(bad)])
    assert code == 2


def test_usage_error_on_bad_grid(capsys):
    code = main(["expand", "--mean", "kubo-ando", "--p", "0.5", "--grid", "0.01:0.9:6"])
    assert code == 2
    capsys.readouterr()


def test_certificate_needs_the_geometric_kind(capsys, scalar_pair):
    a, b = scalar_pair
    code = main(["mean", "--kind", "harmonic", "--a", a, "--b", b, "--certificate"])
    assert code == 2


def test_verify_needs_a_selector(capsys):
    assert main(["verify"]) == 2


def test_json_output_is_deterministic(capsys):
    def snapshot():
        assert main(["expand", "--mean", "wasserstein", "--json", "--seed", "3"]) == 1
        raw = json.loads(capsys.readouterr().out)
        raw.pop("elapsed_ms")
        return json.dumps(raw, sort_keys=True)

    assert snapshot() == snapshot()


def test_out_file_matches_stdout(capsys, tmp_path, scalar_pair):
    a, b = scalar_pair
    dest = tmp_path / "report.txt"
    assert main(["mean", "--kind", "harmonic", "--a", a, "--b", b,
                 "--out", str(dest)]) == 0
    assert dest.read_text() == capsys.readouterr().out


def test_tol_scale_loosens_a_pin(capsys):
    # Scaling every tolerance by 1e6 turns the tabulated failures green.
    code = main(["expand", "--mean", "kubo-ando", "--p", "0.5",
                 "--tol-scale", "1e6"])
    assert code == 0
    capsys.readouterr()


def test_installed_entry_point():
    proc = subprocess.run(
        ["meanlab", "verify", "--criterion", "11", "--json"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema"] == SCHEMA
