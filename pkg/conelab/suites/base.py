"""Suite context: turns checks into ResultRecords and collects curves and certificates."""

import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from pydantic import BaseModel

from conelab.functionals.background import BackgroundData
from conelab.geometry.grid import SphereGrid
from conelab.models.base import ResultRecord, Series, SuiteResult
from conelab.utils.config import ConeLabConfig, ToleranceConfig
from conelab.utils.logger import logger


@dataclass
class SuiteContext:
    """Everything a suite needs: configuration, its own random stream and the result being built."""

    name: str
    config: ConeLabConfig
    rng: np.random.Generator
    result: SuiteResult = field(init=False)

    def __post_init__(self) -> None:
        """Start an empty result."""
        self.result = SuiteResult(suite=self.name)

    @property
    def tol(self) -> ToleranceConfig:
        """Tolerance section of the configuration."""
        return self.config.tolerances

    @cached_property
    def grid(self) -> SphereGrid:
        """Sphere grid of the configuration."""
        return SphereGrid(self.config.grid.n_lat, self.config.grid.n_lon)

    @cached_property
    def base(self) -> BackgroundData:
        """Round background with b_inf = 1."""
        return BackgroundData.round_sphere(self.grid)

    def check(self, check: str, anchor: str, tol: float, compute: Callable[[], float]) -> float:
        """Run one check; an exception becomes a failing record with value inf."""
        started = time.perf_counter()
        try:
            value = float(compute())
        except Exception as e:  # noqa: BLE001
            logger.warning(f"[{self.name}] {check} raised {type(e).__name__}: {e}")
            value = math.inf
        elapsed = time.perf_counter() - started
        logger.debug(f"[{self.name}] {check}: {value:.3e} (tol {tol:.1e}) in {elapsed:.3f}s")
        seconds = elapsed if self.config.output.record_timings else 0.0
        record = ResultRecord(suite=self.name, check=check, anchor=anchor, value=value, tol=tol, seconds=seconds)
        if not record.passed:
            logger.warning(f"[{self.name}] {check} failed: {value:.3e} > {tol:.1e}")
        self.result.records.append(record)
        return value

    def flag(self, check: str, anchor: str, predicate: Callable[[], bool]) -> bool:
        """Record a yes/no check as value 0 (holds) or 1 (fails) against tolerance 0."""
        value = self.check(check, anchor, 0.0, lambda: 0.0 if predicate() else 1.0)
        return value == 0.0

    def curve(self, name: str, x: list[float], y: list[float], **labels: Any) -> None:
        """Keep a curve for the optional plots."""
        self.result.series[name] = Series(x=[float(v) for v in x], y=[float(v) for v in y], **labels)

    def certify(self, name: str, certificate: BaseModel | dict[str, Any]) -> None:
        """Keep a certificate or a dictionary of reported numbers for the JSON output."""
        if isinstance(certificate, BaseModel):
            certificate = certificate.model_dump(mode="json")
        self.result.certificates[name] = certificate


@dataclass(frozen=True)
class Suite:
    """A named experiment."""

    name: str
    description: str
    run: Callable[[SuiteContext], None]


def refused(call: Callable[[], Any], error: type[Exception]) -> bool:
    """Whether the call raises the given error."""
    try:
        call()
    except error:
        return True
    return False
