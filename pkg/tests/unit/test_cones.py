"""Unit tests for warped models, Green profiles, level-set functionals and Eguchi-Hanson."""

import numpy as np
import pytest

from conelab.cones import (
    check_level_identities,
    cone,
    eguchi_hanson_model,
    euclidean,
    eval_A_of_r,
    eval_Aprime,
    eval_Q_of_r,
    eval_R_levelset,
    level_data,
    preset,
    solve_green_radial,
    transition,
)
from conelab.cones.eguchi_hanson import B_INF
from conelab.cones.properties import sample_levels
from conelab.cones.warped import sphere_area
from conelab.errors import ModelError
from conelab.functionals import BackgroundData
from conelab.utils.config import ConeConfig


def test_sphere_area() -> None:
    """Test the unit sphere volumes in dimensions 2 and 3."""
    assert sphere_area(3) == pytest.approx(4.0 * np.pi, rel=1e-14)
    assert sphere_area(4) == pytest.approx(2.0 * np.pi**2, rel=1e-14)


def test_model_validation() -> None:
    """Test that degenerate intervals, dimensions and presets are refused."""
    with pytest.raises(ModelError, match="empty"):
        euclidean(3, 0.0, 1.0)
    with pytest.raises(ModelError, match="n >= 3"):
        cone(0.5, n=2)
    with pytest.raises(ModelError, match="unknown warp preset"):
        preset("paraboloid", ConeConfig())


def test_euclidean_green_profile() -> None:
    """Test b = s with |grad b| = 1 on flat space."""
    m = euclidean()
    gp = solve_green_radial(m)
    s = np.array([0.5, 1.0, 7.0, 30.0])
    assert np.max(np.abs(gp.b(s) / s - 1.0)) < 1e-10
    assert gp.b_inf_estimate == pytest.approx(1.0, rel=1e-12)
    assert gp.residual(1.0) < 1e-10
    assert gp.stokes_residual(2.0) < 1e-8


@pytest.mark.parametrize("name", ["euclidean", "cone", "tanh", "polynomial"])
def test_green_residual_every_preset(name: str) -> None:
    """Test the integrated Green relation across the interior of each preset."""
    m = preset(name, ConeConfig())
    gp = solve_green_radial(m)
    s = np.geomspace(m.s0 * 1.05, m.s1 * 0.95, 8)
    residuals = [gp.residual(float(x)) for x in s]
    assert all(np.isfinite(residuals))
    assert max(residuals) < 1e-10


def test_cone_values() -> None:
    """Test |grad b| = a^2, A = 4 pi a^4 and Q = 0 on an exact cone."""
    a = 0.9
    m = cone(a)
    gp = solve_green_radial(m)
    assert m.is_cone
    assert gp.b_inf_estimate == pytest.approx(a**2, rel=1e-10)
    for r in sample_levels(gp, 4):
        assert eval_A_of_r(m, gp, r) == pytest.approx(4.0 * np.pi * a**4, rel=1e-9)
        assert abs(eval_Aprime(m, gp, r)) < 1e-9
        assert eval_Q_of_r(m, gp, r).value < 1e-9


def test_level_s_out_of_range() -> None:
    """Test that a level outside the model is refused."""
    gp = solve_green_radial(euclidean())
    with pytest.raises(ModelError, match="not attained"):
        gp.level_s(1e3)


def test_transition_end_slope() -> None:
    """Test that b is increasing and its slope reaches a^2 once the warp is linear."""
    m = transition(0.9)
    gp = solve_green_radial(m)
    s = np.linspace(m.s0, m.s1, 50)
    assert np.all(gp.db(s) > 0.0)
    assert gp.b_inf_estimate == pytest.approx(0.81, rel=1e-9)
    assert gp.residual(1.9) < 1e-10
    levels = sample_levels(gp, 4)
    assert max(np.sqrt(level_data(m, gp, r).norm2) for r in levels) > 1e-6


def test_levelset_R_euclidean(base: BackgroundData) -> None:
    """Test R = 4 pi on the level sets of flat space, on the grid and in closed form."""
    m = euclidean()
    gp = solve_green_radial(m)
    value = eval_R_levelset(m, gp, 1.0, base)
    assert value.grid == pytest.approx(4.0 * np.pi, rel=1e-8)
    assert value.difference < 1e-8


def test_level_identities_identities_on_flat_space() -> None:
    """Test that every identity group holds on flat space."""
    m = euclidean()
    gp = solve_green_radial(m)
    for r in (0.5, 2.0, 10.0):
        report = check_level_identities(level_data(m, gp, r))
        assert report.worst("general") < 1e-8
        assert report.worst("ricci") < 1e-6
        assert report.worst("ricci_flat") < 1e-5


def test_level_identities_general_identities_on_transition() -> None:
    """Test the metric-general identities away from a cone."""
    m = transition(0.9)
    gp = solve_green_radial(m)
    for r in sample_levels(gp, 3):
        assert check_level_identities(level_data(m, gp, r)).worst("general") < 1e-8


def test_eguchi_hanson_asymptotics() -> None:
    """Test b / rho -> 1 / sqrt 2 and A -> pi^2 far from the bolt."""
    eh = eguchi_hanson_model()
    assert eh.n == 4
    assert eh.slope_residual(100.0) < 1e-6
    assert eh.b(100.0) / 100.0 == pytest.approx(B_INF, rel=1e-6)
    assert eh.A(100.0) == pytest.approx(np.pi**2, rel=1e-5)


def test_eguchi_hanson_monotone() -> None:
    """Test that A decreases with A' < 0 on the Ricci-flat model."""
    eh = eguchi_hanson_model()
    levels = [1.0, 2.0, 5.0, 12.0]
    values = [eh.A(r) for r in levels]
    assert all(b <= a for a, b in zip(values, values[1:], strict=False))
    assert all(eh.Aprime(r) < 0.0 for r in levels)


def test_eguchi_hanson_ricci_flat() -> None:
    """Test the scale-invariant Ricci residual of the coordinate metric."""
    eh = eguchi_hanson_model()
    assert eh.ricci_residual(1.5) < 1e-6


def test_eguchi_hanson_bolt() -> None:
    """Test that points inside the bolt and bad parameters are refused."""
    eh = eguchi_hanson_model()
    with pytest.raises(ModelError, match="inside the bolt"):
        eh.b(0.5)
    with pytest.raises(ModelError, match="must be positive"):
        eguchi_hanson_model(0.0)
