"""Unit tests for the result writers, the summary and the plots."""

import csv
import json
import math
from pathlib import Path

import numpy as np
import pytest

from conelab.errors import ConfigError
from conelab.linearization import CONFORMAL, OperatorMatrix
from conelab.models.base import CSV_COLUMNS, ResultRecord, RunReport, Series, SuiteResult
from conelab.reporting import RESULTS_CSV, RESULTS_JSON, SUMMARY_MD, plot_series, render_summary, write_report


def _report() -> RunReport:
    good = ResultRecord(suite="demo", check="ok", anchor="x = x", value=0.0, tol=1e-8, seconds=0.25)
    bad = ResultRecord(suite="demo", check="broken", anchor="x = y", value=math.inf, tol=1e-8)
    suite = SuiteResult(
        suite="demo",
        records=[good, bad],
        series={"curve": Series(x=[1.0, 2.0, 3.0], y=[1.0, 0.0, 0.5], logy=True)},
        certificates={"numbers": {"k": 2}},
    )
    suite.matrices["operator"] = OperatorMatrix(np.eye(2), [CONFORMAL, CONFORMAL])
    return RunReport(seed=5, suites=[suite])


def test_write_report_files(tmp_path: Path) -> None:
    """Test the CSV, JSON, summary and matrix files of a run."""
    written = write_report(_report(), tmp_path / "out")
    names = sorted(p.name for p in written)
    assert names == sorted([RESULTS_CSV, RESULTS_JSON, SUMMARY_MD, "demo_operator.csv"])

    with (tmp_path / "out" / RESULTS_CSV).open() as f:
        rows = list(csv.reader(f))
    assert rows[0] == CSV_COLUMNS
    assert [row[1] for row in rows[1:]] == ["ok", "broken"]
    assert [row[5] for row in rows[1:]] == ["True", "False"]
    assert rows[1][6] == "0.0"

    data = json.loads((tmp_path / "out" / RESULTS_JSON).read_text())
    assert data["seed"] == 5
    assert data["failures"] == 1
    assert data["suites"][0]["certificates"]["numbers"] == {"k": 2}
    assert "matrices" not in data["suites"][0]


def test_write_report_timings(tmp_path: Path) -> None:
    """Test that measured seconds are written only on request."""
    write_report(_report(), tmp_path, record_timings=True)
    with (tmp_path / RESULTS_CSV).open() as f:
        rows = list(csv.reader(f))
    assert rows[1][6] == "0.25"


def test_write_report_is_deterministic(tmp_path: Path) -> None:
    """Test that writing the same report twice gives identical bytes."""
    write_report(_report(), tmp_path / "a")
    write_report(_report(), tmp_path / "b")
    for name in (RESULTS_CSV, RESULTS_JSON, SUMMARY_MD):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_write_report_unwritable(tmp_path: Path) -> None:
    """Test that an output path blocked by a file is a configuration error."""
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(ConfigError, match="cannot write results"):
        write_report(_report(), blocker / "out")


def test_summary_lists_failures() -> None:
    """Test the summary header and the failing check table."""
    text = render_summary(_report())
    assert "Seed: 5" in text
    assert "Failures: 1 of 2 checks" in text
    assert "| demo | broken | inf |" in text


def test_plots(tmp_path: Path) -> None:
    """Test that plots drop points a log axis cannot show and skip empty curves."""
    written = write_report(_report(), tmp_path, plots=True)
    svg = tmp_path / "plots" / "demo" / "curve.svg"
    assert svg in written
    assert svg.read_text().startswith("<?xml")
    empty = Series(x=[1.0], y=[-1.0], logy=True)
    assert not plot_series("empty", empty, tmp_path / "empty.svg")
    assert not (tmp_path / "empty.svg").exists()
