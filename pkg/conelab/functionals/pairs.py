"""Pairs (g, w) and their variations (h, v)."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from conelab.errors import GridMismatchError
from conelab.geometry.fields import MetricField, ScalarField, SymTensorField, WeightField
from conelab.geometry.grid import Grid
from conelab.geometry.tensors import MetricGeometry


@dataclass(frozen=True, eq=False)
class WeightedPair:
    """A metric and a positive weight on the cross-section."""

    grid: Grid
    g: MetricField
    w: WeightField

    def __post_init__(self) -> None:
        """Check that both fields live on the grid."""
        self.grid.check(self.g)
        self.grid.check(self.w)

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return self.grid.dim + 1

    @cached_property
    def geometry(self) -> MetricGeometry:
        """Curvature data of g."""
        return MetricGeometry(self.grid, self.g)


@dataclass(frozen=True, eq=False)
class TangentPair:
    """A variation (h, v) of the path (g + t h, w exp(t v))."""

    h: SymTensorField
    v: ScalarField

    def __add__(self, other: "TangentPair") -> "TangentPair":
        """Sum of variations."""
        if self.h.shape != other.h.shape:
            msg = f"cannot add variations of shapes {self.h.shape} and {other.h.shape}"
            raise GridMismatchError(msg)
        return TangentPair(self.h + other.h, self.v + other.v)

    def __sub__(self, other: "TangentPair") -> "TangentPair":
        """Difference of variations."""
        return self + (-1.0) * other

    def __mul__(self, scalar: float) -> "TangentPair":
        """Scalar multiple."""
        return TangentPair(scalar * self.h, scalar * self.v)

    __rmul__ = __mul__

    def __neg__(self) -> "TangentPair":
        """Negation."""
        return (-1.0) * self

    def __truediv__(self, scalar: float) -> "TangentPair":
        """Division by a scalar."""
        return (1.0 / scalar) * self

    @classmethod
    def zeros(cls, grid: Grid) -> "TangentPair":
        """The zero variation."""
        return cls(np.zeros((*grid.shape, grid.dim, grid.dim)), np.zeros(grid.shape))

    def max_abs(self) -> float:
        """Largest component magnitude."""
        return float(max(np.max(np.abs(self.h)), np.max(np.abs(self.v))))
