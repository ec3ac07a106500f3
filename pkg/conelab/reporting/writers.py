"""Result files: CSV of records, JSON of the run, operator matrices and a summary."""

import csv
from pathlib import Path

from conelab.errors import ConfigError
from conelab.models.base import CSV_COLUMNS, RunReport
from conelab.reporting.plots import plot_suite
from conelab.reporting.templates import SUMMARY_TEMPLATE
from conelab.utils.logger import logger

RESULTS_CSV = "results.csv"
RESULTS_JSON = "results.json"
SUMMARY_MD = "summary.md"


def write_csv(report: RunReport, path: Path, *, record_timings: bool = False) -> None:
    """One row per record in suite order."""
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for record in report.records:
            writer.writerow(record.row(record_timings=record_timings))


def write_json(report: RunReport, path: Path) -> None:
    """Records, curves and certificates."""
    path.write_text(report.model_dump_json(indent=2) + "\n")


def write_matrices(report: RunReport, directory: Path) -> list[Path]:
    """CSV of every operator matrix a suite kept."""
    written = []
    for suite in report.suites:
        for name, matrix in sorted(suite.matrices.items()):
            path = directory / f"{suite.suite}_{name}.csv"
            matrix.export_csv(path)
            written.append(path)
    return written


def render_summary(report: RunReport) -> str:
    """Markdown summary with the failing checks."""
    failed = [r for r in report.records if not r.passed]
    return SUMMARY_TEMPLATE.render(report=report, failed=failed)


def write_report(
    report: RunReport,
    directory: Path,
    *,
    plots: bool = False,
    record_timings: bool = False,
) -> list[Path]:
    """Write every output file of a run; the directory is created when missing."""
    try:
        directory.mkdir(parents=True, exist_ok=True)
        write_csv(report, directory / RESULTS_CSV, record_timings=record_timings)
        write_json(report, directory / RESULTS_JSON)
        (directory / SUMMARY_MD).write_text(render_summary(report))
        written = [directory / RESULTS_CSV, directory / RESULTS_JSON, directory / SUMMARY_MD]
        written += write_matrices(report, directory)
        if plots:
            for suite in report.suites:
                written += plot_suite(suite, directory / "plots")
    except OSError as e:
        msg = f"cannot write results to {directory}: {e}"
        raise ConfigError(msg) from e
    logger.info(f"Wrote {len(written)} files to {directory}")
    return written
