"""The background pair (b^-2 g0, b) and the fixed inner product at it."""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from conelab.errors import GridMismatchError, MetricError
from conelab.functionals.pairs import TangentPair, WeightedPair
from conelab.geometry.fields import MetricField, make_flat_torus, make_round_sphere
from conelab.geometry.grid import Grid, SphereGrid, TorusGrid
from conelab.geometry.tensors import MetricGeometry


@dataclass(frozen=True, eq=False)
class BackgroundData:
    """Cross-section data of the limit cone.

    `g0` is the unit-Einstein metric of the cross-section and `b_inf` the
    asymptotic slope of the Green coordinate. The base pair is
    (b_inf^-2 g0, b_inf). `sphere_volume` is the constant on the right of the
    weighted volume constraint, chosen so that the base pair satisfies it.

    It equals Vol(S^(n-1)), and A_inf = b_inf^2 Vol(S^(n-1)), exactly when
    Vol(N, g0) = b_inf^(n-2) Vol(S^(n-1)). A smooth Einstein g0 on S^2 has
    area 4 pi, so the round cross-sections with b_inf != 1 keep the unit
    metric and the base pair stays critical, with A_inf = b_inf^(4-n) 4 pi.
    """

    grid: Grid
    g0: MetricField
    b_inf: float = 1.0
    einstein_constant: float | None = None

    def __post_init__(self) -> None:
        """Validate the slope and the grid."""
        if self.b_inf <= 0:
            msg = f"b_inf must be positive, got {self.b_inf}"
            raise MetricError(msg)
        self.grid.check(self.g0)
        if self.n < 3:
            msg = f"ambient dimension must be at least 3, got {self.n}"
            raise GridMismatchError(msg)

    @classmethod
    def round_sphere(cls, grid: SphereGrid, b_inf: float = 1.0) -> "BackgroundData":
        """Round unit sphere cross-section."""
        return cls(grid, make_round_sphere(grid), b_inf)

    @classmethod
    def flat_torus(cls, grid: TorusGrid, b_inf: float = 1.0) -> "BackgroundData":
        """Flat torus cross-section, used only as a zero-curvature oracle."""
        return cls(grid, make_flat_torus(grid), b_inf, einstein_constant=0.0)

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return self.grid.dim + 1

    @property
    def ricci_constant(self) -> float:
        """Einstein constant of g0."""
        return float(self.n - 2) if self.einstein_constant is None else self.einstein_constant

    @cached_property
    def geometry0(self) -> MetricGeometry:
        """Geometry of g0."""
        return MetricGeometry(self.grid, self.g0)

    @cached_property
    def gbar(self) -> MetricField:
        """Base metric b_inf^-2 g0."""
        return self.g0 / self.b_inf**2

    @cached_property
    def geometry(self) -> MetricGeometry:
        """Geometry of the base metric."""
        return MetricGeometry(self.grid, self.gbar)

    @cached_property
    def base_pair(self) -> WeightedPair:
        """The critical pair (b_inf^-2 g0, b_inf)."""
        return WeightedPair(self.grid, self.gbar, np.full(self.grid.shape, self.b_inf))

    @cached_property
    def sphere_volume(self) -> float:
        """Target of the weighted volume constraint, b^(2-n) Vol(N, g0)."""
        return self.b_inf ** (2 - self.n) * self.geometry0.integrate(np.ones(self.grid.shape))

    @property
    def a_inf(self) -> float:
        """Limit value A_inf = b_inf^2 times the constraint volume."""
        return self.b_inf**2 * self.sphere_volume

    @cached_property
    def measure(self) -> np.ndarray:
        """Nodal weights of the inner product, b dmu_gbar."""
        return self.b_inf * self.geometry.density * self.grid.chart_weights

    def l2_inner(self, x: TangentPair, y: TangentPair) -> float:
        """Fixed inner product: integral of <h1, h2>_gbar + v1 v2 against b dmu_gbar."""
        self.grid.check(x.v)
        self.grid.check(y.v)
        pointwise = self.geometry.inner(x.h, y.h) + x.v * y.v
        return float(np.sum(pointwise * self.measure))

    def norm(self, x: TangentPair) -> float:
        """Length in the fixed inner product."""
        return float(np.sqrt(max(self.l2_inner(x, x), 0.0)))

    def integrate(self, f: np.ndarray) -> float:
        """Integral against dmu_gbar."""
        return self.geometry.integrate(f)

    @cached_property
    def constraint_normal(self) -> TangentPair:
        """Gradient of A1 at the base pair, (gbar / 2, 1)."""
        return TangentPair(0.5 * self.gbar, np.ones(self.grid.shape))

    def tangency_residual(self, x: TangentPair) -> float:
        """Integral of (Tr h / 2 + v) b dmu_gbar; zero on the tangent space at the base."""
        return self.l2_inner(self.constraint_normal, x)
