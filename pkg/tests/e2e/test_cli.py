"""End-to-end tests of the command line."""

import csv
from collections.abc import Iterator
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from conelab.cli import EXIT_ERROR, cli
from conelab.reporting import RESULTS_CSV
from conelab.utils.logger import configure_logging


@pytest.fixture(autouse=True)
def _restore_logging(tmp_path: Path) -> Iterator[None]:
    """The run command installs its own sinks on the captured streams."""
    yield
    configure_logging("WARNING", tmp_path / "logs")


def _write_config(tmp_path: Path, **tolerances: float) -> Path:
    path = tmp_path / "conelab.yaml"
    data = {
        "seed": 7,
        "log_dir": str(tmp_path / "logs"),
        "decay": {"horizon": 200},
        "tolerances": tolerances,
    }
    path.write_text(yaml.safe_dump(data))
    return path


def _failures(csv_path: Path) -> int:
    with csv_path.open() as f:
        return sum(1 for row in csv.DictReader(f) if row["pass"] == "False")


def test_list() -> None:
    """Test that every suite is listed."""
    result = CliRunner().invoke(cli, ["list"])
    assert result.exit_code == 0
    assert "linearization-structure" in result.output
    assert "bootstrap" in result.output


def test_run_exit_code_and_reproducible_csv(tmp_path: Path) -> None:
    """Test that the exit code counts failures and two runs write identical CSV bytes."""
    config = _write_config(tmp_path)
    runner = CliRunner()
    outputs = []
    for name in ("first", "second"):
        out = tmp_path / name
        result = runner.invoke(cli, ["--config", str(config), "run", "decay-engine,bootstrap", "--output-dir", str(out)])
        assert result.exit_code == _failures(out / RESULTS_CSV)
        outputs.append((out / RESULTS_CSV).read_bytes())
    assert outputs[0] == outputs[1]
    assert b"refused-theta-spike" in outputs[0]


def test_tight_tolerance_fails(tmp_path: Path) -> None:
    """Test that an unreachable tolerance gives a nonzero exit with every record written."""
    config = _write_config(tmp_path, series_digits=1e-30)
    out = tmp_path / "tight"
    result = CliRunner().invoke(cli, ["--config", str(config), "run", "decay-engine", "--output-dir", str(out)])
    failures = _failures(out / RESULTS_CSV)
    assert failures >= 1
    assert result.exit_code == failures
    with (out / RESULTS_CSV).open() as f:
        checks = [row["check"] for row in csv.DictReader(f)]
    assert "series-example" in checks
    assert "series-holds" in checks


def test_seed_override(tmp_path: Path) -> None:
    """Test that --seed reaches the written results."""
    config = _write_config(tmp_path)
    out = tmp_path / "seeded"
    CliRunner().invoke(cli, ["--config", str(config), "run", "bootstrap", "--seed", "99", "--output-dir", str(out)])
    assert "Seed: 99" in (out / "summary.md").read_text()


def test_unknown_suite(tmp_path: Path) -> None:
    """Test that an unknown suite exits with the error code."""
    config = _write_config(tmp_path)
    result = CliRunner().invoke(cli, ["--config", str(config), "run", "nope", "--output-dir", str(tmp_path)])
    assert result.exit_code == EXIT_ERROR
    assert "unknown suite" in result.output


def test_bad_config(tmp_path: Path) -> None:
    """Test that an invalid key exits with the error code and names the key."""
    path = tmp_path / "bad.yaml"
    path.write_text("seed: 1\ngrid:\n  resolution: 3\n")
    result = CliRunner().invoke(cli, ["--config", str(path), "config", "show"])
    assert result.exit_code == EXIT_ERROR
    assert "grid.resolution" in result.output


def test_config_init_and_show(tmp_path: Path) -> None:
    """Test writing the default configuration, refusing to overwrite it and showing it."""
    path = tmp_path / "conelab.yaml"
    runner = CliRunner()
    assert runner.invoke(cli, ["config", "init", str(path)]).exit_code == 0
    assert runner.invoke(cli, ["config", "init", str(path)]).exit_code == EXIT_ERROR
    assert runner.invoke(cli, ["config", "init", str(path), "--force"]).exit_code == 0
    shown = runner.invoke(cli, ["--config", str(path), "config", "show"])
    assert shown.exit_code == 0
    assert "seed: 20240601" in shown.output
