"""Configuration management for ConeLab."""

import os
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, PositiveInt, ValidationError, field_validator

from conelab.errors import ConfigError

CONFIG_ENV_VAR = "CONELAB_CONFIG"
DEFAULT_SEED = 20240601


class Section(BaseModel):
    """Base for configuration sections; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")


class GridConfig(Section):
    """Discretization of the cross-section sphere."""

    n_lat: PositiveInt = Field(default=48, description="Gauss-Legendre colatitude nodes")
    n_lon: PositiveInt = Field(default=96, description="Uniform longitude nodes")
    degree: PositiveInt = Field(default=4, description="Harmonic degree L of the variation basis")
    york_degree: PositiveInt = Field(
        default=10, description="Harmonic degree of the vector fields used by York fits"
    )


class FiniteDifferenceConfig(Section):
    """Decreasing steps for Richardson-extrapolated central differences."""

    first_steps: tuple[PositiveFloat, ...] = Field(
        default=(1e-3, 1e-4), min_length=2, description="Steps for first derivatives of integrals"
    )
    field_steps: tuple[PositiveFloat, ...] = Field(
        default=(2e-2, 1e-2, 5e-3), min_length=2, description="Steps for first derivatives of nodal fields"
    )
    second_steps: tuple[PositiveFloat, ...] = Field(
        default=(2e-2, 1e-2, 5e-3), min_length=2, description="Steps for second derivatives"
    )

    @field_validator("first_steps", "field_steps", "second_steps")
    @classmethod
    def _decreasing(cls, steps: tuple[float, ...]) -> tuple[float, ...]:
        if any(a <= b for a, b in zip(steps, steps[1:], strict=False)):
            msg = f"steps must be strictly decreasing, got {steps}"
            raise ValueError(msg)
        return steps


class ToleranceConfig(Section):
    """Acceptance tolerances; every check compares value <= tol."""

    quadrature: PositiveFloat = Field(default=1e-12, description="Areas and volumes by quadrature")
    curvature: PositiveFloat = Field(default=1e-6, description="Round-sphere curvature oracle")
    flat: PositiveFloat = Field(default=1e-10, description="Flat torus curvature oracle")
    consistency: PositiveFloat = Field(default=1e-10, description="Trace and contraction identities")
    stokes: PositiveFloat = Field(default=1e-8, description="Integration by parts identities")
    commutation: PositiveFloat = Field(default=1e-6, description="Hessian commutation residual")
    base_value: PositiveFloat = Field(default=1e-10, description="Functional values at the base")
    constraint: PositiveFloat = Field(default=1e-12, description="Weighted volume constraint")
    criticality: PositiveFloat = Field(default=1e-8, description="Projected gradient at the base")
    first_variation: PositiveFloat = Field(default=1e-6, description="First variations vs FD")
    second_variation: PositiveFloat = Field(default=1e-5, description="Second variations vs FD")
    second_constraint: PositiveFloat = Field(default=1e-7, description="Second-order constraint")
    symmetry: PositiveFloat = Field(default=1e-6, description="Symmetry of the assembled operator")
    gauge: PositiveFloat = Field(default=1e-6, description="Diffeomorphism columns")
    block: PositiveFloat = Field(default=1e-5, description="Off-diagonal TT blocks")
    york: PositiveFloat = Field(default=1e-8, description="York reconstruction and orthogonality")
    york_divergence: PositiveFloat = Field(default=1e-6, description="Divergence of the fitted TT part")
    reduction: PositiveFloat = Field(default=1e-8, description="Lyapunov-Schmidt identities")
    exponent: PositiveFloat = Field(default=0.05, description="Synthetic exponent recovery")
    flow_rate: PositiveFloat = Field(default=1e-6, description="Contraction rate of descent on the quadratic model")
    green: PositiveFloat = Field(default=1e-10, description="Green profile ODE residual")
    cone: PositiveFloat = Field(default=1e-9, description="Exact cone values")
    levelset: PositiveFloat = Field(default=1e-8, description="Two evaluations of R on level sets")
    identity_general: PositiveFloat = Field(default=1e-8, description="Metric-general identities")
    identity_ricci: PositiveFloat = Field(default=1e-6, description="Ricci-corrected identities")
    identity_ricci_flat: PositiveFloat = Field(default=1e-5, description="Ricci-flat identities")
    ricci_flat: PositiveFloat = Field(default=1e-6, description="Ricci residual of Eguchi-Hanson")
    monotonicity_formula: PositiveFloat = Field(default=1e-2, description="Relative A' agreement")
    family_spread: PositiveFloat = Field(default=10.0, description="max/min of fitted constants")
    sequence_slack: PositiveFloat = Field(default=1e-9, description="Relative slack in sequence checks")
    series_digits: PositiveFloat = Field(default=5e-5, description="Reproduction of the series example")


class LojasiewiczConfig(Section):
    """Reduction, exponent estimation and flow experiments."""

    radius: PositiveFloat = Field(default=1e-2, description="Largest sampling radius")
    samples: PositiveInt = Field(default=200, description="Samples for the exponent fit")
    reduction_samples: PositiveInt = Field(default=20, description="Samples for Phi identities")
    newton_tol: PositiveFloat = Field(default=1e-12, description="Newton residual tolerance")
    newton_max_iter: PositiveInt = Field(default=50, description="Newton iteration cap")
    slope_tol: PositiveFloat = Field(default=1e-2, description="Allowed negative log-slope")
    kernel_threshold: PositiveFloat = Field(default=1e-4, description="Relative kernel threshold")
    flow_step: PositiveFloat = Field(default=0.05, description="Explicit descent step")
    flow_iters: PositiveInt = Field(default=100, description="Descent iterations")
    synthetic_dim: PositiveInt = Field(default=6, description="Dimension of the synthetic objectives")
    synthetic_kernel: PositiveInt = Field(default=2, description="Kernel dimension of the degenerate model")


class ConeConfig(Section):
    """Radial and cohomogeneity-one models."""

    cone_slope: PositiveFloat = Field(default=0.9, description="Slope a of the exact cone f = a s")
    s_inner: PositiveFloat = Field(default=0.2, description="Inner end of the radial interval")
    s_outer: PositiveFloat = Field(default=40.0, description="Outer end of the radial interval")
    transition_mid: PositiveFloat = Field(default=2.0, description="Center of slope transition")
    transition_width: PositiveFloat = Field(default=0.5, description="Width of slope transition")
    family_slopes: list[PositiveFloat] = Field(
        default_factory=lambda: [0.98, 0.96, 0.94, 0.92, 0.90],
        description="Outer slopes of the warp family for the annulus bounds",
    )
    radii: PositiveInt = Field(default=6, description="Levels sampled per model")
    polynomial: list[float] = Field(
        default_factory=lambda: [0.0, 1.0, 0.02, -0.0004],
        description="Coefficients of the polynomial warp preset",
    )
    eguchi_hanson_a: PositiveFloat = Field(default=1.0, description="Eguchi-Hanson bolt radius")


class DecayConfig(Section):
    """Sequence machinery."""

    alphas: list[float] = Field(
        default_factory=lambda: [0.3, 0.5, 0.7], description="Lojasiewicz exponents to iterate"
    )
    horizon: PositiveInt = Field(default=10_000, description="Largest index checked directly")
    q0: PositiveFloat = Field(default=1.0, description="First value of the extremal sequences")
    c_prime: PositiveFloat = Field(default=1.0, description="Constant C' of the recursion")
    alg_grid: PositiveInt = Field(default=10, description="Points per axis of the alg_lemma grid")
    mu_step: PositiveFloat = Field(default=1e-3, description="Grid step for mu")
    gamma_step: PositiveFloat = Field(default=1e-3, description="Grid step for gamma")
    delta: PositiveFloat = Field(default=1.0, description="Closeness budget of the bootstrap")


class OutputConfig(Section):
    """Where and how results are written."""

    directory: Path = Field(default=Path("results"), description="Output directory")
    plots: bool = Field(default=False, description="Write SVG plots")
    record_timings: bool = Field(
        default=False, description="Write measured seconds instead of 0.0 in the CSV"
    )


class ConeLabConfig(Section):
    """Main configuration for ConeLab."""

    seed: int = Field(..., description="Seed for every random draw")
    suite: str = Field(default="all", description="Suite run by default")
    parallel: bool = Field(default=False, description="Run suites concurrently")
    log_dir: Path = Field(default=Path("/tmp/conelab_logs"), description="Log directory")
    random_inputs: PositiveInt = Field(default=10, description="Random inputs per oracle")
    random_directions: PositiveInt = Field(default=20, description="Random FD directions")

    grid: GridConfig = Field(default_factory=GridConfig)
    finite_difference: FiniteDifferenceConfig = Field(default_factory=FiniteDifferenceConfig)
    tolerances: ToleranceConfig = Field(default_factory=ToleranceConfig)
    lojasiewicz: LojasiewiczConfig = Field(default_factory=LojasiewiczConfig)
    cones: ConeConfig = Field(default_factory=ConeConfig)
    decay: DecayConfig = Field(default_factory=DecayConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    @classmethod
    def from_mapping(cls, data: dict[str, Any] | None, source: str = "<mapping>") -> "ConeLabConfig":
        """Validate a parsed mapping, reporting the offending key path."""
        try:
            return cls(**(data or {}))
        except ValidationError as e:
            first = e.errors()[0]
            key = ".".join(str(part) for part in first["loc"]) or "<root>"
            msg = f"{source}: invalid key '{key}': {first['msg']}"
            raise ConfigError(msg) from e

    @classmethod
    def read(cls, config_path: Path) -> "ConeLabConfig":
        """Parse a YAML file, reporting the line of syntax errors."""
        try:
            with config_path.open() as f:
                config_data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            where = f"line {mark.line + 1}" if mark is not None else "unknown line"
            msg = f"{config_path}: malformed YAML at {where}"
            raise ConfigError(msg) from e
        if config_data is not None and not isinstance(config_data, dict):
            msg = f"{config_path}: top level must be a mapping"
            raise ConfigError(msg)
        return cls.from_mapping(config_data, source=str(config_path))

    @classmethod
    def load(cls, config_path: Path | None = None) -> "ConeLabConfig":
        """Load configuration from file or use defaults."""
        if config_path is not None:
            if not config_path.exists():
                msg = f"configuration file not found: {config_path}"
                raise ConfigError(msg)
            return cls.read(config_path)

        env_path = os.environ.get(CONFIG_ENV_VAR)
        if env_path:
            return cls.read(Path(env_path))

        # Check default locations
        default_paths = [
            Path.home() / ".conelab" / "config.yaml",
            Path("conelab.yaml"),
        ]

        for path in default_paths:
            if path.exists():
                return cls.read(path)

        return cls(seed=DEFAULT_SEED)

    def save(self, config_path: Path) -> None:
        """Save configuration to file."""
        config_path.parent.mkdir(parents=True, exist_ok=True)
        with config_path.open("w") as f:
            yaml.dump(self.model_dump(mode="json"), f, default_flow_style=False)
