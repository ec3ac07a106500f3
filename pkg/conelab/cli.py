"""CLI interface for ConeLab."""

import asyncio
import sys
from pathlib import Path

import click
import yaml
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from conelab import __description__
from conelab.app import SuiteRunner
from conelab.errors import ConeLabError
from conelab.models.base import RunReport
from conelab.suites.registry import ALL, SUITES
from conelab.utils.config import DEFAULT_SEED, ConeLabConfig
from conelab.utils.logger import configure_logging, logger

console = Console()
EXIT_ERROR = 2
MAX_EXIT = 255


def display_report(report: RunReport) -> None:
    """Per-suite table and the failing checks."""
    table = Table(title=f"ConeLab run (seed {report.seed})")
    table.add_column("Suite", style="cyan")
    table.add_column("Checks", justify="right")
    table.add_column("Failures", justify="right")
    for suite in report.suites:
        style = "green" if suite.failures == 0 else "red"
        table.add_row(suite.suite, str(len(suite.records)), f"[{style}]{suite.failures}[/{style}]")
    console.print(table)

    failed = [r for r in report.records if not r.passed]
    if failed:
        failures = Table(title="Failing checks", show_header=True)
        failures.add_column("Suite", style="cyan")
        failures.add_column("Check")
        failures.add_column("Value", justify="right")
        failures.add_column("Tol", justify="right")
        for r in failed:
            failures.add_row(r.suite, r.check, f"{r.value:.3e}", f"{r.tol:.1e}")
        console.print(failures)


def load_config(ctx: click.Context) -> ConeLabConfig:
    """Configuration chosen by the group options."""
    try:
        return ConeLabConfig.load(ctx.obj["config_path"])
    except ConeLabError as e:
        console.print(f"[red]Error: {e}[/red]")
        sys.exit(EXIT_ERROR)


@click.group()
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="YAML configuration file")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging on the console")
@click.pass_context
def cli(ctx: click.Context, config_path: Path | None, verbose: bool) -> None:
    """ConeLab - numerical laboratory for tangent cones at infinity."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["verbose"] = verbose


@cli.command(name="list")
def list_command() -> None:
    """List the experiment suites in run order."""
    table = Table(show_header=True)
    table.add_column("Suite", style="cyan")
    table.add_column("Description", style="white")
    for suite in SUITES:
        table.add_row(suite.name, suite.description)
    console.print(table)


@cli.command()
@click.argument("suite", required=False)
@click.option("--seed", type=int, help="Override the configured seed")
@click.option("--output-dir", type=click.Path(path_type=Path), help="Override the output directory")
@click.option("--parallel/--sequential", default=None, help="Run suites concurrently")
@click.option("--plots/--no-plots", default=None, help="Write SVG plots")
@click.pass_context
def run(
    ctx: click.Context,
    suite: str | None,
    seed: int | None,
    output_dir: Path | None,
    parallel: bool | None,
    plots: bool | None,
) -> None:
    """Run SUITE (a name, a comma-separated list or all; default from the configuration) and write the results."""
    config = load_config(ctx)
    updates: dict[str, object] = {}
    if seed is not None:
        updates["seed"] = seed
    if parallel is not None:
        updates["parallel"] = parallel
    output: dict[str, object] = {}
    if output_dir is not None:
        output["directory"] = output_dir
    if plots is not None:
        output["plots"] = plots
    if output:
        updates["output"] = config.output.model_copy(update=output)
    config = config.model_copy(update=updates)
    configure_logging("DEBUG" if ctx.obj["verbose"] else "INFO", config.log_dir)

    console.print(Panel.fit(f"[bold cyan]ConeLab[/bold cyan]\n{__description__}", border_style="cyan"))
    try:
        runner = SuiteRunner(config)
        report = asyncio.run(runner.run(suite or config.suite))
        written = runner.write(report)
    except ConeLabError as e:
        console.print(f"[red]Error: {e}[/red]")
        logger.error(f"Run error: {e}")
        sys.exit(EXIT_ERROR)

    display_report(report)
    console.print(f"[dim]{len(written)} files written to {config.output.directory}[/dim]")
    sys.exit(min(report.failures, MAX_EXIT))


@cli.group()
def config() -> None:
    """Show or create configuration files."""


@config.command()
@click.pass_context
def show(ctx: click.Context) -> None:
    """Print the effective configuration as YAML."""
    current = load_config(ctx)
    console.print(yaml.dump(current.model_dump(mode="json"), default_flow_style=False, sort_keys=False))


@config.command()
@click.argument("path", type=click.Path(path_type=Path), default=Path("conelab.yaml"))
@click.option("--force", is_flag=True, help="Overwrite an existing file")
def init(path: Path, force: bool) -> None:
    """Write the default configuration to PATH."""
    if path.exists() and not force:
        console.print(f"[red]{path} exists; use --force to overwrite[/red]")
        sys.exit(EXIT_ERROR)
    ConeLabConfig(seed=DEFAULT_SEED).save(path)
    console.print(f"[green]✓[/green] Wrote {path} (suite {ALL})")


def main() -> None:
    """Main entry point for the CLI."""
    cli()


if __name__ == "__main__":
    main()
