"""Suite orchestration for ConeLab."""

import asyncio
from pathlib import Path

from conelab.models.base import RunReport, SuiteResult
from conelab.reporting.writers import write_report
from conelab.suites.base import Suite
from conelab.suites.registry import resolve, run_suite
from conelab.utils.config import ConeLabConfig
from conelab.utils.logger import logger


class SuiteRunner:
    """Runs a selection of suites and writes their results."""

    def __init__(self, config: ConeLabConfig) -> None:
        """Initialize the runner."""
        self.config = config
        logger.info(f"ConeLab runner initialized with seed {config.seed}")

    async def _run_parallel(self, suites: list[Suite]) -> list[SuiteResult]:
        loop = asyncio.get_running_loop()
        tasks = [loop.run_in_executor(None, run_suite, suite, self.config) for suite in suites]
        # gather keeps the order of the tasks, which is the suite order
        return list(await asyncio.gather(*tasks))

    async def run(self, selection: str | None = None) -> RunReport:
        """Run the selected suites, in parallel when configured."""
        suites = resolve(selection or self.config.suite)
        logger.info(f"Running {len(suites)} suite(s){' in parallel' if self.config.parallel else ''}")
        if self.config.parallel and len(suites) > 1:
            results = await self._run_parallel(suites)
        else:
            results = [run_suite(suite, self.config) for suite in suites]
        report = RunReport(seed=self.config.seed, suites=results)
        logger.info(f"Run finished: {len(report.records)} records, {report.failures} failures")
        return report

    def write(self, report: RunReport, directory: Path | None = None) -> list[Path]:
        """Write the result files of a run."""
        output = self.config.output
        return write_report(
            report, directory or output.directory, plots=output.plots, record_timings=output.record_timings
        )
