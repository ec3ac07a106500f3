"""Unit tests for data models."""

import json
import math

from conelab.models.base import (
    CSV_COLUMNS,
    MonotoneSeq,
    ResultRecord,
    RunReport,
    SuiteResult,
    VerifiedInequality,
)


def _record(value: float, tol: float = 1e-8) -> ResultRecord:
    return ResultRecord(suite="demo", check="c", anchor="x = y", value=value, tol=tol, seconds=1.5)


def test_record_passes_at_tolerance() -> None:
    """Test that a value equal to the tolerance passes."""
    assert _record(1e-8).passed
    assert not _record(2e-8).passed


def test_non_finite_values_fail() -> None:
    """Test that inf and nan never pass."""
    assert not _record(math.inf, tol=math.inf).passed
    assert not _record(math.nan).passed


def test_row_hides_timings() -> None:
    """Test the CSV row order and the zeroed seconds."""
    row = _record(0.0).row()
    assert len(row) == len(CSV_COLUMNS)
    assert row[:3] == ["demo", "c", "x = y"]
    assert row[5] == "True"
    assert row[6] == "0.0"
    assert _record(0.0).row(record_timings=True)[6] == "1.5"


def test_report_failures() -> None:
    """Test that failures are counted over every suite."""
    report = RunReport(
        seed=1,
        suites=[
            SuiteResult(suite="a", records=[_record(0.0), _record(1.0)]),
            SuiteResult(suite="b", records=[_record(math.inf)]),
        ],
    )
    assert report.failures == 2
    assert len(report.records) == 3
    assert [s.failures for s in report.suites] == [1, 1]


def test_report_json_keeps_infinity() -> None:
    """Test that an infinite value survives JSON serialization."""
    report = RunReport(seed=1, suites=[SuiteResult(suite="a", records=[_record(math.inf)])])
    data = json.loads(report.model_dump_json())
    assert data["suites"][0]["records"][0]["value"] == math.inf
    assert data["failures"] == 1


def test_monotone_sequence() -> None:
    """Test absolute indexing and the monotonicity flag."""
    seq = MonotoneSeq(values=[3.0, 2.0, 2.0, 0.0], start=5)
    assert seq[6] == 2.0
    assert seq.stop == 9
    assert seq.verified_monotone
    assert not MonotoneSeq(values=[1.0, 2.0]).verified_monotone
    assert not MonotoneSeq(values=[0.0, -1.0]).verified_monotone


def test_verified_inequality() -> None:
    """Test lhs <= rhs."""
    assert VerifiedInequality(name="x", lhs=1.0, rhs=1.0).holds
    assert not VerifiedInequality(name="x", lhs=1.1, rhs=1.0).holds
