"""Unit tests for the weighted functionals, gradients and the chart."""

import numpy as np
import pytest

from conelab.errors import GridMismatchError, GuardError, MetricError
from conelab.functionals import (
    BackgroundData,
    TangentPair,
    WeightedPair,
    eval_A,
    eval_A1,
    eval_B,
    eval_R,
    exp_chart,
    first_variation_A,
    first_variation_R,
    in_A1,
    project_gradient,
    psi_map,
)
from conelab.geometry import SphereGrid
from conelab.geometry.fields import make_round_sphere
from conelab.linearization import random_tangent
from conelab.variations import derivative, relative_error


def test_base_values(base: BackgroundData) -> None:
    """Test A = 4 pi, B = 8 pi and R = 4 pi at the unit base."""
    p = base.base_pair
    assert eval_A(p) == pytest.approx(4.0 * np.pi, rel=1e-10)
    assert eval_B(p) == pytest.approx(8.0 * np.pi, rel=1e-10)
    assert eval_R(p) == pytest.approx(4.0 * np.pi, rel=1e-10)
    assert eval_A1(p) == pytest.approx(base.sphere_volume, rel=1e-12)


def test_base_value_scales_with_slope(grid: SphereGrid) -> None:
    """Test R = b^2 times the constraint volume b^(2-n) Vol(N, g0), which is b 4 pi for the unit round g0."""
    base = BackgroundData.round_sphere(grid, 0.81)
    assert eval_R(base.base_pair) == pytest.approx(base.a_inf, rel=1e-10)
    assert base.sphere_volume == pytest.approx(4.0 * np.pi / 0.81, rel=1e-12)
    assert base.a_inf == pytest.approx(0.81 * 4.0 * np.pi, rel=1e-12)


def test_slope_cone_cross_section(grid: SphereGrid) -> None:
    """Test A_inf = b^2 4 pi when Vol(N, g0) = b 4 pi, as for the cross-section of a cone of slope sqrt(b)."""
    b = 0.81
    base = BackgroundData(grid, b * make_round_sphere(grid), b, einstein_constant=1.0 / b)
    assert base.sphere_volume == pytest.approx(4.0 * np.pi, rel=1e-12)
    assert eval_A1(base.base_pair) == pytest.approx(4.0 * np.pi, rel=1e-12)
    assert base.a_inf == pytest.approx(b**2 * 4.0 * np.pi, rel=1e-12)


def test_base_is_critical(base: BackgroundData) -> None:
    """Test that the projected gradient vanishes at the base."""
    grad = project_gradient(base.base_pair, base)
    assert base.norm(grad) < 1e-8 * base.norm(base.constraint_normal)


def test_chart_lands_in_constraint(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test that exp_chart preserves the weighted volume."""
    x = random_tangent(base, rng, amplitude=0.1)
    assert in_A1(exp_chart(x, base), base)


def test_chart_at_zero_is_base(base: BackgroundData) -> None:
    """Test exp(0) = base pair."""
    p = exp_chart(TangentPair.zeros(base.grid), base)
    assert np.allclose(p.g, base.gbar)
    assert np.allclose(p.w, base.b_inf)


def test_chart_guard(base: BackgroundData) -> None:
    """Test that a collapsing metric is refused."""
    x = TangentPair(-0.9 * base.gbar, np.zeros(base.grid.shape))
    with pytest.raises(GuardError):
        exp_chart(x, base)


def test_first_variation_A(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test A' against a Richardson difference."""
    x = random_tangent(base, rng, amplitude=0.2)
    p = base.base_pair

    def along(t: float) -> float:
        return eval_A(WeightedPair(base.grid, p.g + t * x.h, p.w * np.exp(t * x.v)))

    assert relative_error(first_variation_A(p, x), derivative(along, (1e-3, 1e-4))) < 1e-6


def test_first_variation_R_off_base(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test R' against a Richardson difference at a pair away from the base."""
    p = exp_chart(random_tangent(base, rng, amplitude=0.05), base)
    x = random_tangent(base, rng, amplitude=0.2)

    def along(t: float) -> float:
        return eval_R(WeightedPair(base.grid, p.g + t * x.h, p.w * np.exp(t * x.v)))

    assert relative_error(first_variation_R(p, x), derivative(along, (1e-3, 1e-4))) < 1e-6


def test_psi_identity(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test Psi(J) = J when g = gbar."""
    J = random_tangent(base, rng).h
    assert np.allclose(psi_map(base.gbar, J, base.gbar), J, atol=1e-12)


def test_tangent_pair_arithmetic(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test sums, differences and scalar multiples."""
    x = random_tangent(base, rng)
    y = random_tangent(base, rng)
    z = (x + y) - y
    assert np.allclose(z.h, x.h)
    assert np.allclose(z.v, x.v)
    assert (2.0 * x / 2.0).max_abs() == pytest.approx(x.max_abs())
    assert TangentPair.zeros(base.grid).max_abs() == 0.0


def test_tangent_pair_shape_mismatch(base: BackgroundData) -> None:
    """Test that pairs from different grids cannot be added."""
    other = TangentPair.zeros(SphereGrid(8, 16))
    with pytest.raises(GridMismatchError):
        _ = TangentPair.zeros(base.grid) + other


def test_background_rejects_bad_slope(grid: SphereGrid) -> None:
    """Test that a non-positive slope is refused."""
    with pytest.raises(MetricError, match="b_inf"):
        BackgroundData.round_sphere(grid, 0.0)


def test_random_tangent_is_tangent(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test that random tangents are orthogonal to grad A1."""
    x = random_tangent(base, rng)
    assert abs(base.tangency_residual(x)) < 1e-10 * base.norm(x)
