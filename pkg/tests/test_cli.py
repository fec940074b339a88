"""End-to-end checks of the command-line surface: verbs, flags, exit codes,
JSON shapes, and suite determinism."""

import json
import os
import subprocess
import sys

import pytest

from qwedge import cli
from qwedge.reports import Report


def run_main(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_series_eisenstein_matches_documented_output(capsys):
    code, out = run_main(capsys, "series", "eisenstein", "--k", "2", "--order", "4")
    assert code == 0
    assert out == '{"offset":"0","coeffs":["-1/24","1","3","4","7"]}\n'


def test_series_theta_has_half_step(capsys):
    code, out = run_main(capsys, "series", "theta", "--order", "4")
    assert code == 0
    assert json.loads(out)["base_step"] == "1/2"


def test_series_psi_shape(capsys):
    code, out = run_main(capsys, "series", "psi", "--K", "2", "--order", "3")
    d = json.loads(out)
    assert code == 0
    assert d["J"] == 2
    assert d["terms"][0] == {"exps": ["-1/24", "1/240"], "coeff": "1"}


def test_series_bracket_weight_two_is_eisenstein(capsys):
    _, b = run_main(capsys, "series", "bracket", "--k", "1", "--order", "8")
    _, g = run_main(capsys, "series", "eisenstein", "--k", "2", "--order", "8")
    assert b == g


def test_verify_counts_reports_final_sums(capsys):
    code, out = run_main(capsys, "verify", "counts", "--n", "3")
    rep = json.loads(out)
    assert code == 0
    assert rep["status"] == "pass"
    assert rep["details"] == {"sum1": 1, "sum2": 1, "sum3": 0}
    assert isinstance(rep["elapsed_ms"], int)


def test_verify_npoint_at_fixed_points(capsys):
    code, out = run_main(capsys, "verify", "npoint", "--n", "2",
                         "--points", "2,3", "--order", "14")
    rep = json.loads(out)
    assert code == 0
    assert rep["params"]["s"] == ["2", "3"]
    assert rep["order_checked"] == 14


def test_verify_seeded_points_are_reproducible(capsys):
    _, out1 = run_main(capsys, "verify", "npoint", "--seed", "7")
    _, out2 = run_main(capsys, "verify", "npoint", "--seed", "7")
    assert json.loads(out1)["params"] == json.loads(out2)["params"]


def test_unknown_id_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "definitely-not-an-id"])
    assert exc.value.code == 2


def test_bad_point_values_exit_2(capsys):
    code, out = run_main(capsys, "verify", "npoint", "--points", "2,1")
    assert code == 2
    assert json.loads(out)["status"] == "error"

    code, out = run_main(capsys, "verify", "t-vanish", "--points", "2,3")
    assert code == 2
    assert json.loads(out)["status"] == "error"


def test_point_count_mismatch_exits_2(capsys):
    code, out = run_main(capsys, "verify", "npoint", "--n", "3",
                         "--points", "2,3")
    assert code == 2


def test_forced_failure_exits_1(monkeypatch, capsys):
    monkeypatch.setitem(
        cli.REGISTRY, "counts",
        lambda a: Report("counts", "forced", {}, "fail"))
    code, out = run_main(capsys, "verify", "counts")
    assert code == 1
    assert json.loads(out)["status"] == "fail"


def test_skew_npoint_routes_agree(capsys):
    code1, closed = run_main(capsys, "skew-npoint", "--closed", "--n", "1",
                             "--k", "3", "--order", "6")
    code2, brute = run_main(capsys, "skew-npoint", "--brute", "--n", "1",
                            "--k", "3", "--order", "6")
    assert code1 == code2 == 0
    assert closed == brute
    d = json.loads(closed)
    assert d["nvars"] == 1 and d["zdeg"] == 3


def _run_suite(threads: str) -> subprocess.CompletedProcess:
    env = dict(os.environ, QWEDGE_THREADS=threads)
    return subprocess.run([sys.executable, "-m", "qwedge", "suite"],
                          capture_output=True, env=env, timeout=120)


def test_suite_is_deterministic_across_thread_counts():
    first = _run_suite("1")
    second = _run_suite("3")
    assert first.returncode == 0
    assert first.stdout == second.stdout
    reports = json.loads(first.stdout)
    ids = [r["identity"] for r in reports[:-1]]
    assert ids == sorted(cli.REGISTRY)
    assert all(r["status"] == "pass" for r in reports[:-1])
    assert "elapsed_ms" not in reports[0]
    assert reports[-1] == {"identity": "aggregate", "status": "pass",
                           "total": len(cli.REGISTRY), "failed": 0}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qwedge", "series", "eta",
                           "--order", "4"], capture_output=True, timeout=60)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["offset"] == "1/24"
