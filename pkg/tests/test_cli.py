"""Scenario parsing, report determinism, exit codes, CLI plumbing."""

import os
import subprocess
import sys

import pytest

from cohomkit.report import CheckRecord, Report, render, render_text, scenario_digest, strip_timing
from cohomkit.scenario import ScenarioError, parse_scenarios
from cohomkit.checks import run_check
from cohomkit.cli import main

MINIMAL = """
scenario tiny
seed 3
base C2
galois C2
check bk-build
"""


def test_parse_minimal():
    (sc,) = parse_scenarios(MINIMAL)
    assert sc.name == "tiny" and sc.seed == 3
    assert sc.base.orders == (2,) and sc.galois.size == 2
    assert [c.name for c in sc.checks] == ["bk-build"]


def test_parse_group_table_and_subgroup():
    text = """
scenario tab
group table 0,1;1,0
subgroup all
base C2
check cohomology degree=1
"""
    (sc,) = parse_scenarios(text)
    assert sc.group.size == 2 and sc.subgroup.size == 2


def test_parse_rejects_bad_table_with_location():
    text = "scenario t\ngroup table 0,1;1,1\nbase C2\ncheck cohomology\n"
    with pytest.raises(ScenarioError) as err:
        parse_scenarios(text)
    assert "line 2" in str(err.value)


def test_parse_rejects_unknown_check():
    with pytest.raises(ScenarioError):
        parse_scenarios("scenario t\ncheck frobnicate\n")


def test_parse_rejects_missing_requirements():
    with pytest.raises(ScenarioError):
        parse_scenarios("scenario t\ncheck bk-build\n")


def test_parse_rejects_nonnormal_subgroup():
    text = "scenario t\ngroup S3\nsubgroup gen:1\nbase C2\ncheck cohomology\n"
    with pytest.raises(ScenarioError):
        parse_scenarios(text)


def test_empty_check_list_is_empty_pass_report():
    (sc,) = parse_scenarios("scenario empty\nbase C2\ngalois C2\n")
    report = Report("empty", scenario_digest(sc.canonical_text()), 0, sc.bound)
    assert report.exit_code() == 0


def test_digest_stable():
    (a,) = parse_scenarios(MINIMAL)
    (b,) = parse_scenarios(MINIMAL)
    assert scenario_digest(a.canonical_text()) == scenario_digest(b.canonical_text())


def test_fail_requires_witness():
    with pytest.raises(AssertionError):
        CheckRecord("x", "fail", {})


def test_exit_code_contract():
    rep = Report("s", "d", 0, 1)
    rep.records = [CheckRecord("a", "pass")]
    assert rep.exit_code() == 0
    rep.records.append(CheckRecord("b", "skipped"))
    assert rep.exit_code() == 3
    rep.records.append(CheckRecord("c", "fail", witness={"w": 1}))
    assert rep.exit_code() == 1


def test_report_determinism_excluding_timing():
    (sc,) = parse_scenarios(MINIMAL)

    def build():
        rep = Report("tiny", scenario_digest(sc.canonical_text()), sc.seed, sc.bound)
        rep.records = [run_check(sc, spec) for spec in sc.checks]
        return render(rep)

    assert strip_timing(build()) == strip_timing(build())


def test_render_key_order_sorted():
    rep = Report("s", "d", 0, 1)
    rep.records = [CheckRecord("a", "pass", {"zz": 1, "aa": 2})]
    body = render(rep, timing=False)
    assert body.index("aa 2") < body.index("zz 1")


def test_cli_run_and_exit_codes(tmp_path):
    f = tmp_path / "s.scn"
    f.write_text(MINIMAL)
    out = tmp_path / "report.txt"
    code = main(["run", str(f), "--out", str(out), "--format", "structured"])
    assert code == 0
    assert "cohomkit-report 1" in out.read_text()


def test_cli_parse_error_exit_2(tmp_path):
    f = tmp_path / "bad.scn"
    f.write_text("scenario x\ncheck nope\n")
    assert main(["run", str(f)]) == 2
    assert main(["run", str(tmp_path / "missing.scn")]) == 2


def test_cli_bound_zero_heavy_checks_skipped(tmp_path):
    f = tmp_path / "s.scn"
    f.write_text("scenario s\nbase C2\ngalois C2\ncheck verify-bk\ncheck b0\n")
    out = tmp_path / "r.txt"
    code = main(["run", str(f), "--bound", "8", "--out", str(out)])
    assert code == 3  # skipped entries, distinct from failure
    assert "skipped" in out.read_text()


def test_cli_env_bound_override(tmp_path, monkeypatch):
    f = tmp_path / "s.scn"
    f.write_text(MINIMAL)
    out = tmp_path / "r.txt"
    monkeypatch.setenv("COHOMKIT_BOUND", "12345")
    assert main(["run", str(f), "--out", str(out)]) == 0
    assert "bound 12345" in out.read_text()


def test_cli_text_format(tmp_path):
    f = tmp_path / "s.scn"
    f.write_text(MINIMAL)
    out = tmp_path / "r.txt"
    assert main(["run", str(f), "--format", "text", "--out", str(out)]) == 0
    assert "[pass" in out.read_text()


def test_cli_list_fixtures(capsys):
    assert main(["list-fixtures"]) == 0
    out = capsys.readouterr().out
    assert "S3" in out and "bk-C2-C2" in out


def test_cli_subprocess_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "cohomkit", "list-fixtures"],
        capture_output=True,
        text=True,
        cwd=os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    )
    assert proc.returncode == 0
    assert "suite scenarios:" in proc.stdout


def test_suite_scenarios_parse():
    from cohomkit.fixtures import SUITE_SCENARIOS

    scenarios = parse_scenarios(SUITE_SCENARIOS)
    assert len(scenarios) >= 5
    names = [sc.name for sc in scenarios]
    assert "bk-smallest" in names


def test_jobs_parallel_matches_serial(tmp_path):
    from cohomkit.cli import _run_scenario
    from cohomkit.scenario import parse_scenarios

    text = "scenario p\nbase C2\ngalois C2\ncheck bk-build\ncheck br-nr\ncheck q-relevable q=3\n"
    (sc,) = parse_scenarios(text)
    serial = _run_scenario(sc, jobs=1)
    parallel = _run_scenario(sc, jobs=3)
    assert [r.name for r in serial.records] == [r.name for r in parallel.records]
    assert [r.status for r in serial.records] == [r.status for r in parallel.records]
