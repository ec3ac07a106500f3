"""Curvature, operator and quadrature oracles on the sphere and torus grids."""

import numpy as np

from conelab.functionals.background import BackgroundData
from conelab.functionals.pairs import TangentPair
from conelab.geometry.fields import make_flat_torus, make_round_sphere
from conelab.geometry.grid import TorusGrid
from conelab.geometry.harmonics import random_scalar, random_symmetric_tensor, real_harmonic
from conelab.geometry.tensors import MetricGeometry
from conelab.suites.base import SuiteContext
from conelab.variations.finite_difference import relative_error

SCALED_RADIUS = 2.0
CONFORMAL_AMPLITUDE = 0.1


def _max_abs(*arrays: np.ndarray) -> float:
    return max(float(np.max(np.abs(a))) for a in arrays)


def _hessian_commutator(geo: MetricGeometry, u: np.ndarray) -> float:
    """Relative residual of Lap Hess u - Hess Lap u = -2 R(Hess u) + Ric o Hess u + Hess u o Ric."""
    hess = geo.hessian(u)
    lhs = geo.rough_laplacian(hess) - geo.hessian(geo.laplacian(u))
    ric_hess = geo.compose(geo.ricci, hess)
    rhs = -2.0 * geo.curvature_action(hess) + ric_hess + np.swapaxes(ric_hess, -1, -2)
    return relative_error(geo.to_frame(lhs), geo.to_frame(rhs))


def _gradient_norm2(geo: MetricGeometry, h: np.ndarray) -> np.ndarray:
    nh = geo.covariant_derivative(h)
    gi = geo.inverse
    return np.einsum("...ia,...jb,...kc,...ijk,...abc->...", gi, gi, gi, nh, nh)


def run(ctx: SuiteContext) -> None:
    """Round and flat curvature, spectral eigenvalues, parallel fields and Stokes identities."""
    tol = ctx.tol
    grid = ctx.grid
    round_geo = ctx.base.geometry0
    four_pi = 4.0 * np.pi

    ctx.check(
        "area",
        "the unit sphere has area 4 pi",
        tol.quadrature,
        lambda: abs(round_geo.integrate(np.ones(grid.shape)) - four_pi) / four_pi,
    )
    ctx.check(
        "round-scalar",
        "scalar curvature of the round cross-section is (n-1)(n-2)",
        tol.curvature,
        lambda: _max_abs(round_geo.scalar - 2.0),
    )
    ctx.check(
        "round-ricci",
        "Ric = (n-2) g on the round cross-section",
        tol.curvature,
        lambda: relative_error(round_geo.to_frame(round_geo.ricci), round_geo.to_frame(round_geo.g)),
    )

    scaled = MetricGeometry(grid, make_round_sphere(grid, SCALED_RADIUS))
    ctx.check(
        "scaled-scalar",
        "the sphere of radius rho has scalar curvature 2 / rho^2",
        tol.curvature,
        lambda: _max_abs(scaled.scalar - 2.0 / SCALED_RADIUS**2),
    )
    ctx.check(
        "scaled-area",
        "the sphere of radius rho has area 4 pi rho^2",
        tol.quadrature,
        lambda: abs(scaled.integrate(np.ones(grid.shape)) / (four_pi * SCALED_RADIUS**2) - 1.0),
    )

    torus = TorusGrid(grid.n_lat, grid.n_lat)
    flat = MetricGeometry(torus, make_flat_torus(torus))
    ctx.check(
        "torus-flat",
        "the flat torus has vanishing curvature",
        tol.flat,
        lambda: _max_abs(flat.riemann, flat.ricci, flat.scalar),
    )

    def conformal_scalar() -> float:
        u = CONFORMAL_AMPLITUDE * real_harmonic(grid, 2, 1)
        geo = MetricGeometry(grid, np.exp(2.0 * u)[..., None, None] * round_geo.g)
        # K = e^{-2u} (1 - Lap_0 u) with Lap_0 Y_2m = -6 Y_2m
        expected = 2.0 * np.exp(-2.0 * u) * (1.0 + 6.0 * u)
        return relative_error(geo.scalar, expected)

    ctx.check("conformal-scalar", "scalar curvature under a conformal change in dimension 2", tol.curvature, conformal_scalar)

    ctx.check(
        "laplacian-eigen",
        "Lap Y_lm = -l(l+1) Y_lm on the round sphere",
        tol.curvature,
        lambda: relative_error(round_geo.laplacian(real_harmonic(grid, 3, 2)), -12.0 * real_harmonic(grid, 3, 2)),
    )
    ctx.check(
        "hessian-constant",
        "the Hessian of a constant vanishes",
        tol.consistency,
        lambda: _max_abs(round_geo.to_frame(round_geo.hessian(np.full(grid.shape, 3.0)))),
    )
    def parallel_divergence() -> float:
        div = round_geo.divergence(3.0 * round_geo.g)
        return float(np.sqrt(np.max(np.abs(round_geo.inner_forms(div, div)))))

    ctx.check("parallel-divergence", "the metric is parallel, so div(c g) = 0", tol.consistency, parallel_divergence)
    ctx.check(
        "lichnerowicz-metric",
        "R_ikjl g^kl = Ric_ij, so the Lichnerowicz operator maps g0 to 2 g0",
        tol.curvature,
        lambda: relative_error(round_geo.to_frame(round_geo.lichnerowicz(round_geo.g)), 2.0 * np.eye(2)),
    )

    def flat_lichnerowicz() -> float:
        h = np.broadcast_to(np.array([[1.0, 0.3], [0.3, -1.0]]), (*torus.shape, 2, 2)).copy()
        return _max_abs(flat.lichnerowicz(h))

    ctx.check("lichnerowicz-flat", "a parallel tensor on the flat torus is annihilated", tol.flat, flat_lichnerowicz)

    def metric_norm() -> float:
        x = TangentPair(ctx.base.g0, np.zeros(grid.shape))
        return abs(ctx.base.l2_inner(x, x) / (2.0 * four_pi) - 1.0)

    ctx.check("l2-inner-metric", "|g0|^2 = n - 1 pointwise, so <(g0, 0), (g0, 0)> = 2 Vol", tol.consistency, metric_norm)

    rng = ctx.rng
    u = random_scalar(grid, rng, 3)
    h = random_symmetric_tensor(round_geo, rng, 3)
    ctx.check(
        "hessian-commutation",
        "Lap Hess u - Hess Lap u = -2 R(Hess u) + Ric o Hess u + Hess u o Ric",
        tol.commutation,
        lambda: _hessian_commutator(round_geo, u),
    )

    def stokes_scalar() -> float:
        lhs = round_geo.integrate(u * round_geo.laplacian(u))
        du = round_geo.gradient(u)
        rhs = -round_geo.integrate(round_geo.inner_forms(du, du))
        return abs(lhs - rhs) / abs(rhs)

    def stokes_tensor() -> float:
        lhs = round_geo.integrate(round_geo.inner(round_geo.rough_laplacian(h), h))
        rhs = -round_geo.integrate(_gradient_norm2(round_geo, h))
        return abs(lhs - rhs) / abs(rhs)

    ctx.check("stokes-laplacian", "integral of u Lap u = -integral of |du|^2", tol.stokes, stokes_scalar)
    ctx.check("stokes-rough-laplacian", "integral of <Lap h, h> = -integral of |nabla h|^2", tol.stokes, stokes_tensor)

    torus_base = BackgroundData.flat_torus(torus)
    ctx.check(
        "torus-volume",
        "the flat square torus has area 4 pi^2",
        tol.quadrature,
        lambda: abs(torus_base.geometry.integrate(np.ones(torus.shape)) / (2.0 * np.pi) ** 2 - 1.0),
    )
