"""Unit tests for grids, harmonics and curvature."""

import numpy as np
import pytest

from conelab.errors import MetricError
from conelab.geometry import MetricGeometry, SphereGrid, TorusGrid, make_flat_torus, make_round_sphere
from conelab.geometry.grid import Grid
from conelab.geometry.harmonics import random_scalar, real_harmonic


def test_sphere_area(grid: SphereGrid) -> None:
    """Test quadrature of the round area form."""
    geo = MetricGeometry(grid, make_round_sphere(grid))
    assert geo.integrate(np.ones(grid.shape)) == pytest.approx(4.0 * np.pi, rel=1e-12)


def test_scaled_sphere_area(grid: SphereGrid) -> None:
    """Test the area of a sphere of radius 2."""
    geo = MetricGeometry(grid, make_round_sphere(grid, 2.0))
    assert geo.integrate(np.ones(grid.shape)) == pytest.approx(16.0 * np.pi, rel=1e-12)


def test_round_scalar_curvature(grid: SphereGrid) -> None:
    """Test that the unit sphere has scalar curvature 2."""
    geo = MetricGeometry(grid, make_round_sphere(grid))
    assert np.max(np.abs(geo.scalar - 2.0)) < 1e-6


def test_round_ricci_is_metric(grid: SphereGrid) -> None:
    """Test Ric = g on the unit sphere."""
    g = make_round_sphere(grid)
    geo = MetricGeometry(grid, g)
    assert np.max(np.abs(geo.to_frame(geo.ricci - g))) < 1e-6


def test_flat_torus_curvature(torus: TorusGrid) -> None:
    """Test that the flat torus has no curvature."""
    geo = MetricGeometry(torus, make_flat_torus(torus))
    assert np.max(np.abs(geo.riemann)) < 1e-10
    assert np.max(np.abs(geo.scalar)) < 1e-10


def test_harmonic_eigenvalues(grid: SphereGrid) -> None:
    """Test Lap Y_lm = -l(l+1) Y_lm."""
    geo = MetricGeometry(grid, make_round_sphere(grid))
    for l, m in [(1, 0), (2, -1), (3, 2), (4, 4)]:
        y = real_harmonic(grid, l, m)
        assert np.max(np.abs(geo.laplacian(y) + l * (l + 1) * y)) < 1e-8


def test_harmonics_orthonormal(grid: SphereGrid) -> None:
    """Test L2 orthonormality of real harmonics."""
    geo = MetricGeometry(grid, make_round_sphere(grid))
    y1 = real_harmonic(grid, 2, 1)
    y2 = real_harmonic(grid, 3, -2)
    assert geo.integrate(y1 * y1) == pytest.approx(1.0, rel=1e-12)
    assert abs(geo.integrate(y1 * y2)) < 1e-12


def test_real_harmonic_rejects_bad_order(grid: SphereGrid) -> None:
    """Test that |m| > l is refused."""
    with pytest.raises(ValueError, match="must not exceed"):
        real_harmonic(grid, 1, 2)


def test_divergence_theorem(grid: SphereGrid, rng: np.random.Generator) -> None:
    """Test that the integral of a Laplacian vanishes."""
    geo = MetricGeometry(grid, make_round_sphere(grid))
    u = random_scalar(grid, rng, 4)
    assert abs(geo.integrate(geo.laplacian(u))) < 1e-10


def test_non_definite_metric_rejected(grid: SphereGrid) -> None:
    """Test that a negative metric names a node."""
    with pytest.raises(MetricError, match="not positive definite"):
        MetricGeometry(grid, -make_round_sphere(grid))


def test_bad_radius_rejected(grid: SphereGrid) -> None:
    """Test that a zero radius is refused."""
    with pytest.raises(ValueError, match="radius"):
        make_round_sphere(grid, 0.0)


def test_grid_too_small() -> None:
    """Test the grid size guard."""
    with pytest.raises(ValueError, match="too small"):
        SphereGrid(1, 8)


def test_grid_equality() -> None:
    """Test that grids compare by node counts."""
    assert SphereGrid(8, 16) == SphereGrid(8, 16)
    assert SphereGrid(8, 16) != SphereGrid(8, 18)


def test_grid_interface_is_abstract() -> None:
    """Test that a grid must supply its weights and colatitude derivative."""
    with pytest.raises(TypeError, match="abstract"):
        Grid()

    class NoDerivative(Grid):
        """Grid without a colatitude derivative."""

        chart_weights = np.ones((1, 1))
        quad_weights = np.ones((1, 1))

    with pytest.raises(TypeError, match="d_theta"):
        NoDerivative()
    assert isinstance(TorusGrid(8, 8), Grid)
