"""Unit tests for the reduction, the exponent estimate and the gradient flow."""

import numpy as np
import pytest

from conelab.errors import PreconditionError
from conelab.lojasiewicz import (
    DegenerateModel,
    QuadraticModel,
    QuarticModel,
    build_reduction,
    estimate_exponent,
    gradient_flow,
    inequality_violation,
    largest_feasible_alpha,
    lipschitz_ratio,
    sample_directions,
)
from conelab.variations import relative_error

DIM = 4
RADIUS = 1e-2


def test_quadratic_exponent() -> None:
    """Test that |x|^2 has exponent 1 with an empty kernel."""
    problem = build_reduction(QuadraticModel(DIM), np.zeros((DIM, 0)))
    assert problem.kernel_dim == 0
    estimate = estimate_exponent(problem, RADIUS, 40, seed=3)
    assert estimate.alpha_hat == pytest.approx(1.0, abs=0.05)
    assert estimate.valid
    assert estimate.constant == pytest.approx(0.25, rel=1e-6)


def test_quartic_exponent() -> None:
    """Test that |x|^4 has exponent 1/2."""
    problem = build_reduction(QuarticModel(DIM), np.eye(DIM))
    estimate = estimate_exponent(problem, RADIUS, 40, seed=3)
    assert estimate.alpha_hat == pytest.approx(0.5, abs=0.05)
    assert estimate.valid


def test_inequality_holds_on_samples() -> None:
    """Test that the fitted inequality holds on every sampled point."""
    problem = build_reduction(QuarticModel(DIM), np.eye(DIM))
    estimate = estimate_exponent(problem, RADIUS, 40, seed=5)
    for d in sample_directions(DIM, 40, 5):
        for r in estimate.radii:
            assert inequality_violation(problem, estimate, r * d) <= 1e-10


def test_phi_inverts_N() -> None:
    """Test Phi(0) = 0 and Phi(N(y)) = y on the degenerate model."""
    model = DegenerateModel(DIM, 2)
    problem = build_reduction(model, model.kernel())
    assert np.linalg.norm(problem.phi(np.zeros(DIM))) == 0.0
    rng = np.random.default_rng(11)
    for _ in range(5):
        y = 1e-2 * rng.standard_normal(DIM)
        forward, backward = problem.identity_defects(y)
        assert forward < 1e-8
        assert backward < 1e-8
    assert problem.invertibility() == pytest.approx(0.5)


def test_reduced_degenerate_is_quartic() -> None:
    """Test that the reduced function of |x_K|^4 + |x_perp|^2 is |x_K|^4."""
    model = DegenerateModel(DIM, 2)
    problem = build_reduction(model, model.kernel())
    z = np.array([0.03, -0.02])
    xk = problem.phi(model.kernel() @ z)[:2]
    assert relative_error(xk + 4.0 * (xk @ xk) * xk, z) < 1e-10
    assert problem.f(z) == pytest.approx(float((xk @ xk) ** 2), rel=1e-10)


def test_lipschitz_ratio_quadratic() -> None:
    """Test that Phi halves distances for |x|^2, where N = 2x."""
    problem = build_reduction(QuadraticModel(DIM), np.zeros((DIM, 0)))
    samples = 1e-2 * np.random.default_rng(2).standard_normal((6, DIM))
    assert lipschitz_ratio(problem, samples) == pytest.approx(0.5, rel=1e-10)


def test_largest_feasible_alpha() -> None:
    """Test the bisection against hand-computed slopes."""
    assert largest_feasible_alpha([(2.0, 2.0)], 1e-6) == 1.0
    assert largest_feasible_alpha([(4.0, 6.0)], 1e-6) == pytest.approx(0.5, abs=1e-6)
    assert largest_feasible_alpha([(1.0, 3.0)], 1e-6) == 0.0


def test_estimate_needs_samples() -> None:
    """Test that zero samples is refused."""
    problem = build_reduction(QuadraticModel(DIM), np.zeros((DIM, 0)))
    with pytest.raises(PreconditionError):
        estimate_exponent(problem, RADIUS, 0)


def test_quadratic_flow_rate() -> None:
    """Test that descent on |x|^2 contracts G by (1 - 2 step)^2."""
    step = 0.05
    flow = gradient_flow(QuadraticModel(DIM), np.full(DIM, 0.25), step, 50)
    assert flow.monotone
    assert flow.halvings == 0
    assert max(abs(r - (1.0 - 2.0 * step) ** 2) for r in flow.rates()) < 1e-12


def test_flow_fixed_point() -> None:
    """Test that the origin stops the descent immediately."""
    flow = gradient_flow(QuadraticModel(DIM), np.zeros(DIM), 0.05, 10)
    assert flow.stopped == "stationary"
    assert flow.values == [0.0]
    assert max(flow.distances) == 0.0


def test_flow_halves_large_steps() -> None:
    """Test that a step overshooting |x|^2 is halved until G decreases."""
    flow = gradient_flow(QuadraticModel(DIM), np.full(DIM, 0.25), 2.0, 5)
    assert flow.halvings > 0
    assert flow.monotone
    assert flow.step < 2.0


def test_quartic_flow_is_polynomial() -> None:
    """Test that G^(-1/2) grows by about 8 step per iteration on |x|^4."""
    step = 0.05
    x0 = np.full(DIM, 0.25)
    flow = gradient_flow(QuarticModel(DIM), x0, step, 200)
    inverse = np.asarray(flow.values) ** -0.5
    assert inverse[-1] - inverse[-2] == pytest.approx(8.0 * step, rel=0.05)
