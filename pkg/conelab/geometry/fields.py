"""Nodal field conventions.

Fields are plain numpy arrays whose two leading axes run over the grid
nodes. Trailing axes are covariant chart indices:

    ScalarField     (n_lat, n_lon)
    VectorField     (n_lat, n_lon, d)        stored as a 1-form V_a
    SymTensorField  (n_lat, n_lon, d, d)
    MetricField     (n_lat, n_lon, d, d)     symmetric positive definite
    WeightField     (n_lat, n_lon)           positive
"""

from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

from conelab.errors import MetricError
from conelab.geometry.grid import Grid, SphereGrid, TorusGrid

ScalarField: TypeAlias = NDArray[np.float64]
VectorField: TypeAlias = NDArray[np.float64]
SymTensorField: TypeAlias = NDArray[np.float64]
MetricField: TypeAlias = NDArray[np.float64]
WeightField: TypeAlias = NDArray[np.float64]


def sym(t: NDArray) -> NDArray:
    """Symmetric part in the last two indices."""
    return 0.5 * (t + np.swapaxes(t, -1, -2))


def make_round_sphere(grid: SphereGrid, radius: float = 1.0) -> MetricField:
    """Round metric radius^2 (d theta^2 + sin^2 theta d phi^2) in chart components."""
    if radius <= 0:
        msg = f"radius must be positive, got {radius}"
        raise ValueError(msg)
    g = np.zeros((*grid.shape, 2, 2))
    g[..., 0, 0] = radius**2
    g[..., 1, 1] = (radius * grid.sin_theta[:, None]) ** 2
    return g


def make_flat_torus(grid: TorusGrid, metric: NDArray | None = None) -> MetricField:
    """Constant metric on the periodic square (identity by default)."""
    m = np.eye(2) if metric is None else np.asarray(metric, dtype=float)
    return np.broadcast_to(m, (*grid.shape, 2, 2)).copy()


def constant_field(grid: Grid, value: float) -> ScalarField:
    """Scalar field with a constant value."""
    return np.full(grid.shape, float(value))


def validate_metric(grid: Grid, g: MetricField) -> None:
    """Check exact symmetry and positive-definiteness, naming the first bad node."""
    grid.check(g)
    if not np.array_equal(g, np.swapaxes(g, -1, -2)):
        msg = "metric components are not symmetric"
        raise MetricError(msg)
    eig = np.linalg.eigvalsh(g)
    bad = np.argwhere(~(eig[..., 0] > 0.0))
    if bad.size:
        i, j = (int(v) for v in bad[0])
        msg = f"metric is not positive definite at node ({i}, {j}), theta={grid.theta[i]:.6f}, phi={grid.phi[j]:.6f}"
        raise MetricError(msg)


def outer(a: VectorField, b: VectorField) -> SymTensorField:
    """Symmetrized tensor product of two 1-forms."""
    return sym(np.einsum("...a,...b->...ab", a, b))
