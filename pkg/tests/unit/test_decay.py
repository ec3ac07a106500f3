"""Unit tests for the decay iteration, Theta summability and the bootstrap."""

import numpy as np
import pytest

from conelab.decay import (
    adversarial_instances,
    alg_constant,
    alg_lemma,
    annulus_chain,
    bootstrap_uniqueness,
    cauchy_annuli,
    exact_cone_instance,
    extremal_sequence,
    feasible_split,
    forward_instance,
    iterate_decay,
    o3_step,
    power_sequence,
    series_lemma,
    sum_theta,
    synthetic_annuli,
    theta_from_Q,
    to_base2,
    to_base4,
    verify_alg_lemma,
)
from conelab.decay.bootstrap import STEPS
from conelab.decay.sequences import fitted_decay_constant
from conelab.decay.theta import relation_violations
from conelab.errors import PreconditionError
from conelab.models.base import MonotoneSeq


def test_alg_constant() -> None:
    """Test the two branches of the constant at alpha = 1/2."""
    assert alg_constant(0.5, 1.0) == pytest.approx(0.5 * 2.0**-1.5)
    assert alg_constant(0.5, 0.01) == pytest.approx(1.0 - 2.0**-0.5)
    with pytest.raises(PreconditionError):
        alg_constant(1.0, 1.0)


def test_alg_lemma() -> None:
    """Test the bound at an admissible point and the refusal outside the hypotheses."""
    bound = alg_lemma(0.25, 1.0, 0.5, 1.0)
    assert bound.lhs == pytest.approx(1.0)
    assert bound.holds
    with pytest.raises(PreconditionError, match="exceeds"):
        alg_lemma(0.5, 0.51, 0.5, 1.0)


def test_alg_lemma_grid() -> None:
    """Test that the constant holds on every admissible grid point."""
    check = verify_alg_lemma(10)
    assert check.points == 10**4
    assert check.checked > 0
    assert check.violations == 0
    assert check.worst_margin >= 0.0


def test_o3_step() -> None:
    """Test the one-step recursion on both sides of equality."""
    assert o3_step(1.0, 0.25, 0.5, 1.0)
    assert not o3_step(0.3, 0.3, 0.5, 1.0)
    with pytest.raises(PreconditionError):
        o3_step(-1.0, 0.0, 0.5, 1.0)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_decay_certificate(alpha: float) -> None:
    """Test that the extremal sequence is certified with polynomial and logarithmic decay."""
    seq = extremal_sequence(1.0, alpha, 1.0, 300)
    cert = iterate_decay(seq, alpha, 1.0, 0, 298)
    assert cert.monotone
    assert cert.accepted
    assert cert.failing_index is None
    assert cert.beta == pytest.approx(alpha / (1.0 - alpha))
    assert all(item.holds for item in cert.inequalities)


def test_decay_refused_on_constant_sequence() -> None:
    """Test that a sequence that never drops is refused at its first index."""
    cert = iterate_decay(MonotoneSeq(values=[0.5] * 10), 0.5, 1.0, 0, 7)
    assert not cert.accepted
    assert cert.failing_index == 0


def test_decay_index_range() -> None:
    """Test that indices outside the sequence are refused."""
    seq = extremal_sequence(1.0, 0.5, 1.0, 10)
    with pytest.raises(PreconditionError):
        iterate_decay(seq, 0.5, 1.0, 3, 3)
    with pytest.raises(PreconditionError):
        iterate_decay(seq, 0.5, 1.0, 0, 9)


def test_series_example() -> None:
    """Test sum_(j >= 10) (a_j - a_(j+1)) j = 0.195166 for a_j = j^(-2) against the bound 0.2."""
    j = np.arange(1, 10_001, dtype=float)
    example = series_lemma(MonotoneSeq(values=(j**-2.0).tolist(), start=1), 1.0, 1.0, 1, 1.0, 10)
    assert example.total == pytest.approx(0.195166, abs=5e-5)
    assert example.bound == pytest.approx(0.2)
    assert example.holds


def test_series_needs_admissible_nu() -> None:
    """Test that nu outside [1, 1 + beta) is refused."""
    seq = power_sequence(1.0, 1.0, 50, start=1)
    with pytest.raises(PreconditionError, match="nu must lie"):
        series_lemma(seq, 1.0, 1.0, 1, 2.0, 10)


def test_base_conversions() -> None:
    """Test that 4-adic and 2-adic indexing round trip on even indices."""
    q = extremal_sequence(0.5, 0.5, 1.0, 6, start=1)
    two = to_base2(q)
    assert two.start == 2
    assert two.base == 2
    assert to_base4(two).values == q.values
    with pytest.raises(PreconditionError):
        to_base4(q)


def test_theta_relation_and_sum() -> None:
    """Test that the maximal Theta is summable with the fitted constant."""
    q = power_sequence(1e-3, 1.0, 400)
    mu, gamma = feasible_split(1.0)
    theta = theta_from_Q(q, mu, 1.0)
    assert theta.start == 1
    assert len(theta) == len(q) - 4
    result = sum_theta(theta, fitted_decay_constant(q, 1.0), 1.0, 2, gamma)
    assert result.beta_bar > 0.0
    assert result.holds


def test_theta_needs_two_adic_q() -> None:
    """Test that a 4-adic Q is refused."""
    with pytest.raises(PreconditionError, match="2-adically"):
        theta_from_Q(extremal_sequence(0.5, 0.5, 1.0, 10), 0.1, 1.0)


def test_annulus_chain(rng: np.random.Generator) -> None:
    """Test the triangle chain against 3 sum Theta on synthetic annuli."""
    theta = theta_from_Q(power_sequence(1e-3, 1.0, 100), 0.1, 1.0)
    distances = synthetic_annuli(theta, 2, 10, 4, rng)
    chain = annulus_chain(distances, theta, 2)
    assert chain.holds
    assert chain.bound == pytest.approx(cauchy_annuli(theta, 2, 10))


def test_bootstrap_forward_accepted() -> None:
    """Test that the forward instance passes every step in order."""
    cert = bootstrap_uniqueness(forward_instance(500))
    assert cert.accepted
    assert [step.step for step in cert.steps] == list(STEPS)
    assert cert.beta_bar > 0.0
    assert cert.distance_bound < 1.0


@pytest.mark.parametrize("alpha", [0.5, 0.7])
def test_bootstrap_forward_from_extremal_sequence(alpha: float) -> None:
    """Test that the forward instance reads the extremal recursion 2-adically and certifies."""
    inst = forward_instance(400, alpha=alpha)
    extremal = extremal_sequence(1e-4, alpha, 1e-2, 200)
    assert inst.q.base == 2
    assert inst.q.values[::2] == extremal.values
    assert inst.q.values[1::2] == extremal.values
    assert inst.beta == pytest.approx(alpha / (1.0 - alpha))
    assert relation_violations(inst.theta, inst.q) == []
    cert = bootstrap_uniqueness(inst)
    assert cert.accepted
    assert cert.distance_bound < inst.delta


def test_bootstrap_exact_cone() -> None:
    """Test that zero Q and Theta certify with a zero distance bound."""
    cert = bootstrap_uniqueness(exact_cone_instance())
    assert cert.accepted
    assert cert.distance_bound == 0.0


def test_bootstrap_adversarial_refused() -> None:
    """Test that each broken instance is refused at its own step and scale."""
    for name, (inst, step, scale) in adversarial_instances(300, 7).items():
        cert = bootstrap_uniqueness(inst)
        assert not cert.accepted, name
        assert cert.failing_step == step, name
        assert cert.failing_scale == scale, name


def test_bootstrap_index_checks() -> None:
    """Test that mismatched oracle lengths are refused before any step runs."""
    inst = forward_instance(50)
    broken = inst.model_copy(update={"closeness": inst.closeness[:-1]})
    with pytest.raises(PreconditionError, match="must match"):
        bootstrap_uniqueness(broken)
