"""Unit tests for finite differences, variation formulas and path constraints."""

import math

import numpy as np
import pytest

from conelab.errors import ConvergenceError
from conelab.functionals import BackgroundData, TangentPair
from conelab.geometry import MetricGeometry
from conelab.geometry.harmonics import random_symmetric_tensor, real_harmonic
from conelab.linearization import random_tangent
from conelab.variations import (
    constraint_derivatives,
    constraint_residuals,
    derivative,
    dscalar_curvature,
    dvolume_form,
    lie_derivative_oracle,
    relative_error,
    second_derivative,
    second_order_completion,
)


def test_derivative_of_sine() -> None:
    """Test the Richardson first difference."""
    assert derivative(math.sin, (1e-3, 1e-4)) == pytest.approx(1.0, abs=1e-10)


def test_second_derivative_of_exponential() -> None:
    """Test the Richardson second difference."""
    assert second_derivative(lambda t: math.exp(2.0 * t), (2e-3, 1e-3)) == pytest.approx(4.0, rel=1e-6)


def test_three_level_extrapolation() -> None:
    """Test that a third step cancels the s^4 error of a fast-varying path."""
    steps = (2e-2, 1e-2, 5e-3)
    two = derivative(lambda t: math.exp(20.0 * t), steps[:2])
    three = derivative(lambda t: math.exp(20.0 * t), steps)
    assert abs(three - 20.0) < 1e-3 * abs(two - 20.0)
    assert three == pytest.approx(20.0, rel=1e-7)
    assert second_derivative(lambda t: math.exp(20.0 * t), steps) == pytest.approx(400.0, rel=1e-7)


def test_extrapolation_is_exact_on_polynomials() -> None:
    """Test that k steps differentiate polynomials of degree 2k exactly."""
    assert derivative(lambda t: t + t**3 + t**5, (0.4, 0.2, 0.1)) == pytest.approx(1.0, abs=1e-12)
    assert second_derivative(lambda t: t**2 + t**4 + t**6, (0.4, 0.2, 0.1)) == pytest.approx(2.0, abs=1e-10)


@pytest.mark.parametrize("steps", [(1e-3,), (1e-4, 1e-3), (1e-3, 1e-3), (1e-3, -1e-4)])
def test_bad_steps_rejected(steps: tuple[float, ...]) -> None:
    """Test that steps must be at least two, positive and strictly decreasing."""
    with pytest.raises(ValueError, match="strictly decreasing"):
        derivative(math.sin, steps)


def test_derivative_of_arrays() -> None:
    """Test that array paths are differentiated componentwise."""
    d = derivative(lambda t: np.array([t, t**2, 3.0 * t]), (1e-3, 1e-4))
    assert np.allclose(d, [1.0, 0.0, 3.0], atol=1e-10)


def test_non_finite_difference_raises() -> None:
    """Test that a non-finite difference is refused."""
    with pytest.raises(ConvergenceError, match="non-finite"):
        derivative(lambda t: math.inf * t, (1e-3, 1e-4))


def test_relative_error_floor() -> None:
    """Test that a zero reference gives the absolute error."""
    assert relative_error(np.array([1e-3]), np.zeros(1)) == pytest.approx(1e-3)
    assert relative_error(2.0, 4.0) == pytest.approx(0.5)


def test_relative_error_explicit_scale() -> None:
    """Test that an explicit scale replaces the size of a vanishing reference."""
    assert relative_error(np.array([1e-12]), np.zeros(1), scale=1e2) == pytest.approx(1e-14)
    assert relative_error(np.array([3.0]), np.array([1.0]), scale=4.0) == pytest.approx(0.5)


def test_volume_form_variation(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test (dmu)' / dmu = Tr h / 2 against a difference of densities."""
    geo = base.geometry
    h = random_symmetric_tensor(geo, rng, 3, 0.1)

    def density(t: float) -> np.ndarray:
        return MetricGeometry(base.grid, base.gbar + t * h).density

    fd = derivative(density, (1e-3, 1e-4)) / geo.density
    assert relative_error(dvolume_form(geo, h), fd) < 1e-8


def test_scalar_curvature_variation(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test R' against a difference of scalar curvatures."""
    geo = base.geometry
    h = random_symmetric_tensor(geo, rng, 3, 0.1)

    def scalar(t: float) -> np.ndarray:
        return MetricGeometry(base.grid, base.gbar + t * h).scalar

    assert relative_error(dscalar_curvature(geo, h), derivative(scalar, (1e-2, 5e-3))) < 1e-6


def test_lie_derivative_oracle(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test that variations along L_V g are Lie derivatives on a metric with non-constant R."""
    geo = MetricGeometry(base.grid, base.gbar + 0.05 * random_symmetric_tensor(base.geometry, rng, 2))
    assert np.ptp(geo.scalar) > 1e-2
    vector = geo.rotate(geo.gradient(real_harmonic(base.grid, 2, 1))) + geo.gradient(real_harmonic(base.grid, 3, 0))
    scalar_defect, ricci_defect = lie_derivative_oracle(geo, vector)
    assert scalar_defect < 1e-6
    assert ricci_defect < 1e-6


def test_lie_derivative_oracle_round_sphere(base: BackgroundData) -> None:
    """Test that the defect stays small where V(R) vanishes identically."""
    geo = base.geometry
    vector = geo.rotate(geo.gradient(real_harmonic(base.grid, 2, 1))) + geo.gradient(real_harmonic(base.grid, 3, 0))
    scalar_defect, ricci_defect = lie_derivative_oracle(geo, vector)
    assert scalar_defect < 1e-8
    assert ricci_defect < 1e-8


def test_second_order_completion(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test that the completion cancels the second constraint."""
    x = random_tangent(base, rng, amplitude=0.3)
    residuals = constraint_residuals(base.base_pair, x, second_order_completion(base, x), base.sphere_volume)
    assert residuals.first < 1e-12
    assert residuals.second < 1e-12


def test_constant_path_constraints(base: BackgroundData) -> None:
    """Test that the constant path has vanishing constraint derivatives."""
    residuals = constraint_derivatives(lambda t: base.base_pair, base, (1e-3, 1e-4))
    assert residuals.first < 1e-12
    assert residuals.second < 1e-12


def test_completion_has_constant_weight(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test that the completion only moves the weight, by a constant."""
    x = random_tangent(base, rng)
    xprime = second_order_completion(base, x)
    assert np.all(xprime.h == 0.0)
    assert np.ptp(xprime.v) == 0.0
    assert isinstance(xprime, TangentPair)
