"""Base Pydantic models for ConeLab results, reports and certificates."""

import math
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field


class ResultRecord(BaseModel):
    """One check of one suite: a measured value against its tolerance."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    suite: str = Field(..., description="Suite that produced the record")
    check: str = Field(..., description="Check identifier, unique within the suite")
    anchor: str = Field(..., description="Statement of the source result the check exercises")
    value: float = Field(..., description="Measured value; smaller is better")
    tol: float = Field(..., description="Tolerance the value is compared with")
    seconds: float = Field(default=0.0, description="Wall time of the check")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        """Finite value not above the tolerance."""
        return math.isfinite(self.value) and self.value <= self.tol

    def row(self, *, record_timings: bool = False) -> list[str]:
        """CSV row in the fixed column order."""
        seconds = self.seconds if record_timings else 0.0
        return [self.suite, self.check, self.anchor, repr(self.value), repr(self.tol), str(self.passed), repr(seconds)]


CSV_COLUMNS = ["suite", "check", "anchor", "value", "tol", "pass", "seconds"]


class ExponentEstimate(BaseModel):
    """Empirical Lojasiewicz exponent with its fitted constants."""

    alpha_hat: float = Field(..., ge=0.0, le=1.0, description="Largest feasible exponent")
    samples: int = Field(..., description="Number of usable samples")
    constant: float = Field(..., description="max |G - G(0)|^(2 - alpha) / |grad G|^2")
    worst_ratio: float = Field(..., description="Same ratio at the largest radius")
    valid: bool = Field(..., description="Whether some alpha in (0, 1) is feasible")
    radii: list[float] = Field(default_factory=list, description="Sampling radii")
    seed: int | None = Field(default=None, description="Seed of the sampling directions")
    grad_constant: float = Field(default=0.0, description="max |grad f(Pi_K x)|^2 / |grad G(x)|^2")
    f_constant: float = Field(default=0.0, description="max |G(x) - f(Pi_K x)| / |grad G(x)|^2")
    chain_constant: float = Field(default=0.0, description="max |f(Pi_K x) - G(0)|^(2 - alpha) / |grad G(x)|^2")


class FlowReport(BaseModel):
    """Trajectory of explicit gradient descent on an objective."""

    values: list[float] = Field(default_factory=list, description="G along the trajectory")
    distances: list[float] = Field(default_factory=list, description="Distance to the final iterate")
    gradient_norms: list[float] = Field(default_factory=list, description="|grad G| along the trajectory")
    step: float = Field(..., description="Step in use at the end")
    halvings: int = Field(default=0, description="Number of step halvings")
    stopped: str = Field(default="", description="Reason for stopping early, empty when all iterations ran")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def monotone(self) -> bool:
        """G nonincreasing along the trajectory."""
        return all(b <= a for a, b in zip(self.values, self.values[1:], strict=False))

    def rates(self, limit: float = 0.0) -> list[float]:
        """Successive ratios (G_{k+1} - limit) / (G_k - limit)."""
        shifted = [v - limit for v in self.values]
        return [b / a for a, b in zip(shifted, shifted[1:], strict=False) if a != 0.0]


class InequalityReport(BaseModel):
    """Both sides of an inequality lhs <= C rhs and the smallest admissible C."""

    name: str = Field(..., description="Inequality name")
    lhs: float = Field(..., description="Left side")
    rhs: float = Field(..., description="Right side without the constant")
    offset: float = Field(default=0.0, description="Term added to the right side outside the constant")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def constant(self) -> float:
        """Smallest C with lhs <= offset + C rhs; 0 when lhs <= offset."""
        excess = self.lhs - self.offset
        if excess <= 0.0:
            return 0.0
        if self.rhs <= 0.0:
            return math.inf
        return excess / self.rhs

    def holds(self, constant: float, slack: float = 1e-12) -> bool:
        """lhs <= offset + constant rhs up to a relative slack."""
        scale = max(abs(self.lhs), abs(self.offset), 1.0)
        return self.lhs <= self.offset + constant * self.rhs + slack * scale


class MonotoneSeq(BaseModel):
    """Nonnegative sequence indexed from `start`, with its monotonicity recorded."""

    values: list[float] = Field(..., description="Q_j for j = start, start + 1, ...")
    start: int = Field(default=0, description="Index of the first value")
    base: int = Field(default=4, description="Dyadic base the index refers to (4 or 2)")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def verified_monotone(self) -> bool:
        """Nonincreasing and nonnegative."""
        v = np.asarray(self.values)
        return bool(np.all(v >= 0.0) and np.all(np.diff(v) <= 0.0))

    def __len__(self) -> int:
        """Number of stored values."""
        return len(self.values)

    def __getitem__(self, j: int) -> float:
        """Q_j by absolute index."""
        return self.values[j - self.start]

    @property
    def stop(self) -> int:
        """One past the last stored index."""
        return self.start + len(self.values)

    def array(self) -> np.ndarray:
        """Values as an array."""
        return np.asarray(self.values, dtype=float)


class ThetaSeq(BaseModel):
    """Scale-invariant distances Theta_j with the relation linking them to Q."""

    values: list[float] = Field(..., description="Theta_j for j = start, start + 1, ...")
    start: int = Field(default=0, description="Index of the first value")
    mu: float = Field(..., gt=0.0, description="Exponent mu of the relation")
    c_mu: float = Field(..., gt=0.0, description="Constant C_mu of the relation")

    def __len__(self) -> int:
        """Number of stored values."""
        return len(self.values)

    def __getitem__(self, j: int) -> float:
        """Theta_j by absolute index."""
        return self.values[j - self.start]

    @property
    def stop(self) -> int:
        """One past the last stored index."""
        return self.start + len(self.values)

    def array(self) -> np.ndarray:
        """Values as an array."""
        return np.asarray(self.values, dtype=float)


class VerifiedInequality(BaseModel):
    """A re-checkable inequality emitted by a certificate."""

    name: str = Field(..., description="What is bounded")
    index: int | None = Field(default=None, description="Index the inequality refers to")
    lhs: float = Field(..., description="Left side")
    rhs: float = Field(..., description="Right side")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def holds(self) -> bool:
        """lhs <= rhs."""
        return self.lhs <= self.rhs


class DecayCertificate(BaseModel):
    """Outcome of the decay iteration on a monotone sequence."""

    alpha: float = Field(..., gt=0.0, lt=1.0)
    c_prime: float = Field(..., gt=0.0, description="Constant of the recursion")
    c: float = Field(..., description="Per-step increment of Q^(alpha - 1)")
    c_bound: float = Field(..., description="Constant of the polynomial decay bound")
    c_log: float = Field(default=0.0, description="Constant of the logarithmic decay bound")
    j1: int = Field(..., description="First index of the iteration")
    j2: int = Field(..., description="Last index of the iteration")
    monotone: bool = Field(..., description="Input monotonicity, checked")
    accepted: bool = Field(..., description="Whether every step verified")
    failing_index: int | None = Field(default=None, description="First index where the recursion failed")
    inequalities: list[VerifiedInequality] = Field(default_factory=list)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def beta(self) -> float:
        """1 / (1 - alpha) - 1."""
        return 1.0 / (1.0 - self.alpha) - 1.0


class StepRecord(BaseModel):
    """One verified (or failed) step of the bootstrap."""

    step: str = Field(..., description="Step name")
    scale: int | None = Field(default=None, description="Dyadic index the step refers to")
    passed: bool = Field(..., description="Whether the step verified")
    detail: str = Field(default="", description="Numbers behind the verdict")


class BootstrapCertificate(BaseModel):
    """Effective uniqueness certificate of an abstract instance."""

    name: str = Field(..., description="Instance name")
    accepted: bool = Field(..., description="Whether every step verified")
    failing_step: str | None = Field(default=None)
    failing_scale: int | None = Field(default=None)
    beta_bar: float = Field(default=0.0, description="Exponent of the effective bound")
    c_bar: float = Field(default=0.0, description="Constant of the effective bound")
    distance_bound: float = Field(default=0.0, description="Bound on the rescaled annulus distances")
    steps: list[StepRecord] = Field(default_factory=list)


class BootstrapInstance(BaseModel):
    """Abstract scale data fed to the bootstrap: A, Q, Theta and the closeness oracle, all 2-adic."""

    name: str = Field(..., description="Instance name")
    a_values: list[float] = Field(..., description="A(2^j) for j = q.start, ...")
    q: MonotoneSeq = Field(..., description="Q(2^j)")
    theta: ThetaSeq = Field(..., description="Theta_j with its relation to Q")
    closeness: list[float] = Field(..., description="Distance of annulus j to the cone, j = q.start, ...")
    delta: float = Field(..., gt=0.0, description="Closeness budget")
    epsilon: float = Field(..., gt=0.0, description="Allowed drop of A")
    j1: int = Field(..., ge=2, description="First scale of the induction")
    m: int = Field(..., description="Last scale of the induction")
    beta: float = Field(..., gt=0.0, description="Decay exponent of Q")
    gamma: float | None = Field(default=None, description="Hoelder exponent; searched when absent")
    seed_scales: int = Field(default=4, description="Scales j1, ..., j1 + seed_scales - 1 of hypothesis (A)")


class Series(BaseModel):
    """A curve produced by a suite, kept for plotting."""

    x: list[float] = Field(default_factory=list)
    y: list[float] = Field(default_factory=list)
    xlabel: str = Field(default="", description="Label of the horizontal axis")
    ylabel: str = Field(default="", description="Label of the vertical axis")
    logx: bool = Field(default=False)
    logy: bool = Field(default=False)


class SuiteResult(BaseModel):
    """Records, curves and certificates of one suite."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    suite: str = Field(..., description="Suite name")
    records: list[ResultRecord] = Field(default_factory=list)
    series: dict[str, Series] = Field(default_factory=dict)
    certificates: dict[str, Any] = Field(default_factory=dict, description="Certificates and reported numbers")
    matrices: dict[str, Any] = Field(default_factory=dict, exclude=True, description="Operator matrices for CSV export")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def failures(self) -> int:
        """Number of failing records."""
        return sum(1 for r in self.records if not r.passed)


class RunReport(BaseModel):
    """All suites of one run, in suite order."""

    model_config = ConfigDict(ser_json_inf_nan="constants")

    seed: int = Field(..., description="Seed of the run")
    suites: list[SuiteResult] = Field(default_factory=list)

    @property
    def records(self) -> list[ResultRecord]:
        """Every record of every suite."""
        return [r for s in self.suites for r in s.records]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def failures(self) -> int:
        """Number of failing records over all suites."""
        return sum(s.failures for s in self.suites)
