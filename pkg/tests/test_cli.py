import json
import math

import pytest
from click.testing import CliRunner

import flatwell.report as report_mod
from flatwell.cli import cli, parse_N_list
from flatwell.nondim import PhysicalParams
from flatwell.render import render
from flatwell.report import EXIT_CONVERGENCE, EXIT_VARIATIONAL, ReportConfig, run_physical, run_table1


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, list(args), catch_exceptions=False)


def test_parse_N_list():
    assert parse_N_list("2..4,inf") == (2.0, 3.0, 4.0, math.inf)
    assert parse_N_list("6") == (6.0,)


@pytest.mark.parametrize("text", ["2.5", "1", "a", "5..3", ""])
def test_parse_N_list_rejects(text):
    import click

    with pytest.raises(click.BadParameter):
        parse_N_list(text)


def test_real_N_opt_in():
    assert parse_N_list("2.5", allow_real=True) == (2.5,)


@pytest.fixture(scope="module")
def table2_md(runner):
    res = invoke(runner, "table2")
    assert res.exit_code == 0
    return res.output


@pytest.fixture(scope="module")
def table2_json(runner):
    res = invoke(runner, "table2", "--format", "json")
    assert res.exit_code == 0
    return res.output


def test_table2_cells(table2_md):
    lines = table2_md.splitlines()
    assert "| n::N | 2 | 3 | 4 | 5 | 6 | 7 | 8 | ∞ |" in lines
    row3 = next(l for l in lines if l.startswith("| 3 |")).split("|")
    row4 = next(l for l in lines if l.startswith("| 4 |")).split("|")
    row6 = next(l for l in lines if l.startswith("| 6 |")).split("|")
    assert row3[4].strip() == "7.456"      # n=3, N=4
    assert row6[9].strip() == "88.83"      # n=6, N=inf
    assert row4[2].strip() == "7.000"      # n=4, N=2


def test_json_schema(table2_json):
    data = json.loads(table2_json)
    assert set(data["meta"]) >= {"engine", "policy", "version"}
    assert len(data["rows"]) == 48
    assert set(data["rows"][0]) >= {"n", "N", "lambda", "converged_digits"}
    assert {r["N"] for r in data["rows"]} == {2, 3, 4, 5, 6, 7, 8, "inf"}


def test_json_round_trip_renders_identical_markdown(table2_md, table2_json):
    assert render(json.loads(table2_json), "md") == table2_md


def test_deterministic(runner, table2_json):
    assert invoke(runner, "table2", "--format", "json").output == table2_json


def test_csv(runner):
    res = invoke(runner, "table2", "--N", "4,inf", "--levels", "2", "--format", "csv")
    lines = res.output.splitlines()
    assert lines[0] == "n,N,lambda,converged_digits"
    assert len(lines) == 5
    assert lines[-1].startswith("2,inf,9.869")


def test_out_file(runner, tmp_path):
    path = tmp_path / "t.json"
    res = invoke(runner, "spectrum", "--N", "6", "--levels", "2", "--format", "json", "--out", str(path))
    assert res.exit_code == 0 and res.output == ""
    rows = json.loads(path.read_text())["rows"]
    assert [round(r["lambda"], 3) for r in rows] == [1.145, 4.339]


def test_both_engines(runner):
    res = invoke(runner, "spectrum", "--N", "4", "--levels", "2", "--engine", "both", "--format", "json")
    rows = json.loads(res.output)["rows"]
    assert [r["engine"] for r in rows] == ["spectral", "spectral", "fd", "fd"]
    assert abs(rows[0]["lambda"] - rows[2]["lambda"]) < 1e-4


def test_threads_do_not_change_output(runner, monkeypatch, table2_json):
    monkeypatch.setenv("FLATWELL_THREADS", "4")
    assert invoke(runner, "table2", "--format", "json").output == table2_json


def test_table1(runner):
    res = invoke(runner, "table1", "--format", "json")
    assert res.exit_code == 0
    rows = json.loads(res.output)["rows"]
    assert [r["reference_trial"] for r in rows] == ["1", "1.053", "1.157", "1.288", "1.434", "1.592", "1.758"]
    assert [round(r["lambda1"], 3) for r in rows] == [1.000, 1.023, 1.060, 1.102, 1.145, 1.186, 1.226]
    n2 = rows[0]
    assert all(abs(v - 1.0) < 5e-4 for v in [n2["lambda1"], *n2["bounds"].values()])
    assert not any(r["violation"] for r in rows)


def test_table1_violation_exit(monkeypatch):
    class Fake:
        energy_bound = 0.5

    monkeypatch.setattr(report_mod, "minimize_bound", lambda fam, N: Fake())
    payload, status = run_table1(ReportConfig(command="table1", N_values=(3.0,)))
    assert status == EXIT_VARIATIONAL
    assert payload["rows"][0]["violation"] is True
    assert "VIOLATION" in render(payload, "md")


def test_converge(runner):
    # on the L = 6 box the 36-node grid already resolves the harmonic ground state
    res = invoke(runner, "converge", "--N", "2", "--half-width", "6", "--format", "json")
    rows = json.loads(res.output)["rows"]
    d = {(r["node_count"], r["n"]): r["agreed_digits"] for r in rows}
    assert d[(60, 1)] >= 6
    assert d[(36, 1)] is None


def test_converge_octic_top_level(runner):
    res = invoke(runner, "converge", "--N", "8", "--nodes", "36,80", "--format", "json")
    rows = json.loads(res.output)["rows"]
    assert next(r for r in rows if r["node_count"] == 80 and r["n"] == 6)["agreed_digits"] >= 4


def test_converge_rejects_infinite_well(runner):
    assert invoke(runner, "converge", "--N", "inf").exit_code == 2


def test_convergence_failure_exit(runner):
    res = invoke(runner, "table2", "--N", "3", "--nodes", "16,18", "--sig-figs", "8")
    assert res.exit_code == EXIT_CONVERGENCE
    assert "ERR" in res.output


def test_physical_unit_scales(runner):
    res = invoke(runner, "physical", "--hbar", "1", "--mass", "0.5", "--a", "1", "--mu", "1", "--N", "2",
                 "--levels", "3", "--format", "json")
    rows = json.loads(res.output)["rows"]
    assert all(r["energy"] == pytest.approx(r["lambda"], rel=1e-14) for r in rows)


def test_physical_prints_sigma_and_partition(runner):
    res = invoke(runner, "physical", "--hbar", "1", "--mass", "0.5", "--a", "1", "--mu", "16", "--N", "2", "--levels", "1")
    assert "sigma = 2.0" in res.output
    res = invoke(runner, "physical", "--hbar", "1", "--mass", "0.5", "--a", "1", "--mu", "16", "--N", "6", "--levels", "1")
    assert "kinetic 3/4, potential 1/4" in res.output


def test_physical_energy_from_eq7():
    p = PhysicalParams(2.0, 3.0, 0.5, 7.0)
    payload, _ = run_physical(ReportConfig(command="physical", N_values=(4.0,), levels=2, physical=p))
    E_a = 2.0**2 / (2 * 3.0 * 0.25)
    for r in payload["rows"]:
        assert r["energy"] == pytest.approx(r["lambda"] * E_a ** (2 / 3) * 7.0 ** (1 / 3), rel=1e-12)


@pytest.mark.parametrize("bad", ["0", "-1"])
def test_physical_rejects_nonpositive(runner, bad):
    res = invoke(runner, "physical", "--hbar", bad, "--mass", "1", "--a", "1", "--mu", "1", "--N", "2")
    assert res.exit_code == 2


def test_usage_errors(runner):
    assert invoke(runner, "table2", "--N", "1").exit_code == 2
    assert invoke(runner, "table2", "--nodes", "60,36").exit_code == 2
    assert invoke(runner, "spectrum").exit_code == 2


def test_audit(runner):
    res = invoke(runner, "audit", "--format", "json")
    assert res.exit_code == 0, res.output
    checks = {c["name"]: c["passed"] for c in json.loads(res.output)["checks"]}
    assert all(checks.values()) and len(checks) == 4


def test_audit_markdown_renders(runner):
    res = invoke(runner, "audit", "--N", "2,4", "--levels", "2")
    assert "| engine agreement | PASS |" in res.output
