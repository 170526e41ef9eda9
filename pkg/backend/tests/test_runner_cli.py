#!/usr/bin/env python3

import json
import os
import re
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import cli
from geometry.automorphism import MobiusMap, cayley_matrix, rotated_cayley
from verification.catalog import CHECKS
from verification.config import SuiteConfig
from verification.report import EXIT_INVALID, EXIT_OK, render_structured, render_text
from verification.runner import classify, mobius_report, run
from verification.suites import constant_column_gap


def _small(**overrides):
    values = {"suites": ["grading"], "n_list": [1, 2], "samples": 5}
    values.update(overrides)
    return SuiteConfig.build(**values)


def test_run_is_deterministic():
    first = render_structured(run(_small()))
    second = render_structured(run(_small()))
    assert first == second


def test_workers_do_not_change_the_report():
    assert render_structured(run(_small(workers=3))) == render_structured(run(_small()))


def test_grading_suite_passes():
    report = run(_small())
    assert report.exit_code == EXIT_OK
    assert report.summary.total == len(report.checks) > 0
    assert {c.n for c in report.checks} == {1, 2}
    assert report.config["seed"] == 20240601


def test_tables_suite_reports_permutation_deviation():
    report = run(_small(suites=["tables"], n_list=[3], samples=3))
    names = {c.name for c in report.checks}
    assert {"tables.translation", "tables.permutation", "tables.composite"} <= names
    assert any(d.name.startswith("tables.permutation") for d in report.deviations)
    assert all(d.status == "WARN" for d in report.deviations)
    assert report.exit_code == EXIT_OK


def test_tightened_tolerance_fails():
    report = run(_small(suites=["metric"], n_list=[2], samples=3, tol={"metric.einstein_siegel": 1e-300}))
    failed = [c.name for c in report.failures()]
    assert "metric.einstein_siegel" in failed
    assert report.exit_code == 1


ANCHOR = re.compile(r"^[^:]+: .*=")


@pytest.mark.parametrize("name", sorted(CHECKS))
def test_catalog_anchor_states_an_identity(name):
    anchor = CHECKS[name].anchor
    assert ANCHOR.match(anchor), anchor
    assert anchor.split(":", 1)[0].strip()


def test_report_checks_carry_catalog_anchor():
    report = run(_small(suites=["grading", "mobius"], n_list=[2], samples=3))
    assert report.checks
    for c in report.checks:
        assert c.anchor == CHECKS[c.name].anchor


def test_tilde_values_anchor_names_its_convention():
    anchor = CHECKS["potential.tilde_values"].anchor
    assert "Re X = (X + Xbar)/2" in anchor
    assert "-2(n+1)" in anchor


def test_constant_column_gap_only_when_exercised():
    C = MobiusMap(cayley_matrix(2))
    off_axis = [np.array([0.1, 0.2j]), np.array([-0.3, 0.4])]
    on_axis = [np.array([0.1, 0.0]), np.array([0.2j, 0.0])]
    assert constant_column_gap(C, off_axis) > 0.1
    assert constant_column_gap(C, on_axis) == 0.0


def test_mobius_suite_records_constant_column_deviation():
    report = run(_small(suites=["mobius"], n_list=[2], samples=3))
    found = [d for d in report.deviations if d.name == "mobius.apply[constant column]"]
    assert len(found) == 1
    assert found[0].residual > CHECKS["mobius.cayley_matrix"].tolerance


def test_text_report_ends_with_summary():
    report = run(_small(n_list=[1]))
    text = render_text(report)
    s = report.summary
    assert text.strip().splitlines()[-1] == f"{s.passed}/{s.total} checks passed, {s.failed} failed, {s.warnings} warnings"
    assert "grading.count" in text


def test_classify_report():
    report = classify({"n": 2, "r": 3.0})
    assert report.kind == "classify"
    assert report.verdict["kind"] == "Canonical"
    assert report.verdict["r"] == pytest.approx(3.0, rel=1e-7)
    assert report.exit_code == EXIT_OK


def test_classify_with_mobius_block():
    n = 2
    entries = [[v.real, v.imag] for v in cayley_matrix(n).reshape(-1)]
    report = classify({"n": n, "mobius": entries})
    assert report.verdict["mobius"]["verdict"] == "CayleyUpToRotation"
    assert "mobius: CayleyUpToRotation" in render_text(report)


EXAMPLES = os.path.join(os.path.dirname(__file__), "..", "examples")


@pytest.mark.parametrize("name, kind, r", [
    ("psi0.json", "Canonical", 1.0),
    ("nonconstant.json", "NotConstantNorm", None),
    ("sigma.json", "Canonical", 2.0),
    ("cayley_mobius.json", "Canonical", 1.0),
])
def test_bundled_examples(name, kind, r):
    report = classify(os.path.join(EXAMPLES, name))
    assert report.verdict["kind"] == kind
    if r is not None:
        assert report.verdict["r"] == pytest.approx(r, rel=1e-7)
    if name == "cayley_mobius.json":
        assert report.verdict["mobius"]["verdict"] == "CayleyUpToRotation"


def test_mobius_report_recovers_rotation():
    result = mobius_report(rotated_cayley(3, 0.4))
    assert result["verdict"] == "CayleyUpToRotation"
    assert result["rotation"] == pytest.approx(0.4, abs=1e-10)


def test_cli_classify(tmp_path, capsys):
    path = tmp_path / "psi0.json"
    path.write_text(json.dumps({"n": 3}), encoding="utf-8")
    assert cli.main(["classify", "--input", str(path)]) == EXIT_OK
    assert "verdict: Canonical" in capsys.readouterr().out


def test_cli_run_writes_output(tmp_path):
    out = tmp_path / "reports" / "grading.json"
    code = cli.main(["run", "--n", "2", "--samples", "3", "--suite", "grading",
                     "--format", "structured", "--output", str(out)])
    assert code == EXIT_OK
    data = json.loads(out.read_text(encoding="utf-8"))
    assert data["summary"]["failed"] == 0
    assert data["config"]["n_list"] == [2]


def test_cli_relative_output_goes_to_report_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("REPORT_DIR", str(tmp_path / "reports"))
    code = cli.main(["run", "--n", "1", "--samples", "3", "--suite", "grading",
                     "--format", "structured", "--output", "grading.json"])
    assert code == EXIT_OK
    data = json.loads((tmp_path / "reports" / "grading.json").read_text(encoding="utf-8"))
    assert data["config"]["n_list"] == [1]


@pytest.mark.parametrize("argv", [
    ["run", "--n", "9"],
    ["run", "--n", "2", "--tol", "metric.nope=1e-3"],
    ["run", "--n", "2", "--tol", "metric.inverse"],
    ["run", "--samples", "0"],
])
def test_cli_invalid_config(argv):
    assert cli.main(argv) == EXIT_INVALID


def test_cli_invalid_input(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{ not json", encoding="utf-8")
    assert cli.main(["classify", "--input", str(path)]) == EXIT_INVALID
    assert cli.main(["classify", "--input", str(tmp_path / "missing.json")]) == EXIT_INVALID
    scaled = tmp_path / "kappa.json"
    scaled.write_text(json.dumps({"n": 2, "kappa": 2.0}), encoding="utf-8")
    assert cli.main(["classify", "--input", str(scaled)]) == EXIT_INVALID


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
