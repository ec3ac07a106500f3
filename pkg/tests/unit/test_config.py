"""Unit tests for configuration management."""

from pathlib import Path

import pytest

from conelab.errors import ConfigError
from conelab.utils.config import (
    CONFIG_ENV_VAR,
    DEFAULT_SEED,
    ConeConfig,
    ConeLabConfig,
    GridConfig,
    ToleranceConfig,
)


def test_grid_config_defaults() -> None:
    """Test GridConfig default values."""
    config = GridConfig()
    assert config.n_lat == 48
    assert config.n_lon == 96
    assert config.degree == 4


def test_tolerance_config_defaults() -> None:
    """Test ToleranceConfig default values."""
    config = ToleranceConfig()
    assert config.quadrature == 1e-12
    assert config.exponent == 0.05
    assert config.family_spread == 10.0


def test_cone_config_defaults() -> None:
    """Test ConeConfig default values."""
    config = ConeConfig()
    assert config.cone_slope == 0.9
    assert config.s_inner < config.s_outer


def test_conelab_config_requires_seed() -> None:
    """Test that a mapping without a seed is rejected with its key."""
    with pytest.raises(ConfigError, match="'seed'"):
        ConeLabConfig.from_mapping({})


def test_unknown_key_reports_path() -> None:
    """Test that an unknown nested key is reported by its dotted path."""
    with pytest.raises(ConfigError, match=r"tolerances\.bogus"):
        ConeLabConfig.from_mapping({"seed": 1, "tolerances": {"bogus": 1.0}})


def test_negative_tolerance_rejected() -> None:
    """Test that a negative tolerance is rejected."""
    with pytest.raises(ConfigError, match=r"tolerances\.york"):
        ConeLabConfig.from_mapping({"seed": 1, "tolerances": {"york": -1.0}})


def test_malformed_yaml_reports_line(tmp_path: Path) -> None:
    """Test that a YAML syntax error names its line."""
    path = tmp_path / "bad.yaml"
    path.write_text("seed: 1\ngrid:\n  n_lat: [1, 2\n")
    with pytest.raises(ConfigError, match="malformed YAML at line"):
        ConeLabConfig.read(path)


def test_non_mapping_rejected(tmp_path: Path) -> None:
    """Test that a YAML list at the top level is rejected."""
    path = tmp_path / "list.yaml"
    path.write_text("- 1\n- 2\n")
    with pytest.raises(ConfigError, match="must be a mapping"):
        ConeLabConfig.read(path)


def test_save_load_round_trip(tmp_path: Path) -> None:
    """Test that a saved configuration loads back unchanged."""
    config = ConeLabConfig(seed=3, grid=GridConfig(n_lat=16, n_lon=32))
    path = tmp_path / "nested" / "conelab.yaml"
    config.save(path)
    assert ConeLabConfig.load(path) == config


def test_missing_file(tmp_path: Path) -> None:
    """Test that an explicit missing path is an error."""
    with pytest.raises(ConfigError, match="not found"):
        ConeLabConfig.load(tmp_path / "absent.yaml")


def test_env_var(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Test that the environment variable selects the file."""
    path = tmp_path / "env.yaml"
    ConeLabConfig(seed=11).save(path)
    monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
    assert ConeLabConfig.load().seed == 11


def test_defaults_without_files(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Test the built-in defaults when no file is found."""
    monkeypatch.delenv(CONFIG_ENV_VAR, raising=False)
    monkeypatch.setenv("HOME", str(tmp_path))
    monkeypatch.chdir(tmp_path)
    config = ConeLabConfig.load()
    assert config.seed == DEFAULT_SEED
    assert config.suite == "all"
    assert not config.parallel


def test_finite_difference_steps() -> None:
    """Test the default step ladders and that steps must decrease."""
    config = ConeLabConfig.from_mapping({"seed": 1})
    assert config.finite_difference.field_steps == (2e-2, 1e-2, 5e-3)
    assert config.finite_difference.first_steps == (1e-3, 1e-4)
    with pytest.raises(ConfigError, match=r"finite_difference\.second_steps"):
        ConeLabConfig.from_mapping({"seed": 1, "finite_difference": {"second_steps": [1e-3, 2e-3]}})
    with pytest.raises(ConfigError, match=r"finite_difference\.first_steps"):
        ConeLabConfig.from_mapping({"seed": 1, "finite_difference": {"first_steps": [1e-3]}})
