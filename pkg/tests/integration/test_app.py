"""Integration tests for the suite runner."""

from pathlib import Path

from conelab.app import SuiteRunner
from conelab.reporting import RESULTS_CSV, RESULTS_JSON, SUMMARY_MD
from conelab.utils.config import ConeLabConfig

SELECTION = "decay-engine,bootstrap"


def _config(tmp_path: Path, *, parallel: bool) -> ConeLabConfig:
    return ConeLabConfig.from_mapping(
        {
            "seed": 42,
            "parallel": parallel,
            "log_dir": str(tmp_path / "logs"),
            "decay": {"horizon": 200},
            "output": {"directory": str(tmp_path / "results")},
        }
    )


async def test_runner_records_every_suite(tmp_path: Path) -> None:
    """Test that the runner returns one result per selected suite, in run order."""
    runner = SuiteRunner(_config(tmp_path, parallel=False))
    report = await runner.run(SELECTION)
    assert [s.suite for s in report.suites] == ["decay-engine", "bootstrap"]
    assert report.seed == 42
    assert all(s.records for s in report.suites)
    assert report.failures == sum(1 for r in report.records if not r.passed)
    assert "alg-lemma-grid" in {r.check for r in report.suites[0].records}
    assert "refused-far-annulus" in {r.check for r in report.suites[1].records}


async def test_parallel_matches_sequential(tmp_path: Path) -> None:
    """Test that concurrent suites give the same records as a sequential run."""
    sequential = await SuiteRunner(_config(tmp_path, parallel=False)).run(SELECTION)
    parallel = await SuiteRunner(_config(tmp_path, parallel=True)).run(SELECTION)
    assert parallel.model_dump(mode="json") == sequential.model_dump(mode="json")


async def test_runner_writes_results(tmp_path: Path) -> None:
    """Test that the runner writes the result files to the configured directory."""
    runner = SuiteRunner(_config(tmp_path, parallel=False))
    report = await runner.run("bootstrap")
    written = runner.write(report)
    directory = tmp_path / "results"
    assert {directory / RESULTS_CSV, directory / RESULTS_JSON, directory / SUMMARY_MD} <= set(written)
    assert report.suites[0].certificates["bootstrap-forward"]["accepted"]
