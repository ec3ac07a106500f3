"""Result files and plots."""

from conelab.reporting.plots import plot_series, plot_suite
from conelab.reporting.writers import (
    RESULTS_CSV,
    RESULTS_JSON,
    SUMMARY_MD,
    render_summary,
    write_csv,
    write_json,
    write_matrices,
    write_report,
)

__all__ = [
    "RESULTS_CSV",
    "RESULTS_JSON",
    "SUMMARY_MD",
    "plot_series",
    "plot_suite",
    "render_summary",
    "write_csv",
    "write_json",
    "write_matrices",
    "write_report",
]
