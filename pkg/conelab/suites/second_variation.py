"""Second variations of A, B and R at the base pair and their TT and conformal forms."""

from collections.abc import Callable

import numpy as np

from conelab.functionals import BackgroundData, TangentPair, WeightedPair, eval_A, eval_B, eval_R
from conelab.geometry.grid import TorusGrid
from conelab.geometry.harmonics import random_scalar, random_symmetric_tensor, real_harmonic
from conelab.linearization import (
    conformal_block_operator,
    random_tangent,
    second_variation_A,
    second_variation_B,
    second_variation_R,
    sv_conformal,
    sv_transverse_traceless,
)
from conelab.suites.base import SuiteContext
from conelab.variations import relative_error, second_derivative, second_order_completion

PATH_AMPLITUDE = 0.3
SCALING = 0.1


def _path(base: BackgroundData, x: TangentPair, xprime: TangentPair) -> Callable[[float], WeightedPair]:
    def at(t: float) -> WeightedPair:
        g = base.gbar + t * x.h + 0.5 * t**2 * xprime.h
        return WeightedPair(base.grid, g, base.b_inf * np.exp(t * x.v + t**2 * xprime.v))

    return at


def _fd_checks(ctx: SuiteContext, base: BackgroundData) -> None:
    rng = ctx.rng
    steps = ctx.config.finite_difference.second_steps
    paths = []
    for _ in range(ctx.config.random_inputs):
        x = random_tangent(base, rng, amplitude=PATH_AMPLITUDE)
        xprime = TangentPair(
            random_symmetric_tensor(base.geometry, rng, 3, PATH_AMPLITUDE),
            random_scalar(base.grid, rng, 3, amplitude=PATH_AMPLITUDE),
        )
        paths.append((x, xprime))

    functionals = {
        "A": (eval_A, second_variation_A, "A'' = b^3 integral of (3v + Tr h / 2)^2 + 6v' + Tr h' / 2 - |h|^2 / 2"),
        "B": (eval_B, second_variation_B, "B'' at an Einstein base after integration by parts"),
        "R": (eval_R, second_variation_R, "R'' = (A'' - B'' / (n - 2)) / (2 - n)"),
    }
    for name, (value, variation, anchor) in functionals.items():
        ctx.check(
            f"second-variation-{name}",
            anchor,
            ctx.tol.second_variation,
            lambda value=value, variation=variation: max(
                relative_error(
                    second_derivative(lambda t: value(_path(base, x, xp)(t)), steps), variation(base, x, xp)
                )
                for x, xp in paths
            ),
        )


def _scaling_path_defect(base: BackgroundData) -> float:
    n = base.n
    v = -0.5 * (n - 1) * SCALING
    volume = base.integrate(np.ones(base.grid.shape))
    expected = base.b_inf**3 * volume * (9.0 * v**2 + 3.0 * v * (n - 1) * SCALING + (n - 1) * (n - 3) * SCALING**2 / 4.0)
    scaling = TangentPair(SCALING * base.gbar, np.full(base.grid.shape, v))
    return abs(second_variation_A(base, scaling, TangentPair.zeros(base.grid)) / expected - 1.0)


def _closed_forms(ctx: SuiteContext, base: BackgroundData) -> None:
    tol = ctx.tol
    b = base.b_inf
    n = base.n
    zero = TangentPair.zeros(base.grid)

    ctx.check(
        "second-variation-zero",
        "R'' vanishes along the constant path",
        tol.consistency,
        lambda: abs(second_variation_R(base, zero, zero)),
    )

    ctx.check(
        "scaling-path",
        "A'' = b^3 Vol (9v^2 + 3v (n-1) c + (n-1)(n-3) c^2 / 4) along h = c gbar, v = -(n-1) c / 2",
        tol.consistency,
        lambda: _scaling_path_defect(base),
    )

    v_tt = real_harmonic(base.grid, 2, 1)
    ctx.check(
        "tt-weight-only",
        "(2 - n) R'' = 6 b^3 integral of v^2 along (0, v) with v of mean zero",
        tol.consistency,
        lambda: abs(
            sv_transverse_traceless(base, np.zeros_like(base.gbar), v_tt)
            / (6.0 * b**3 * base.integrate(v_tt**2) / (2 - n))
            - 1.0
        ),
    )

    def tt_against_general() -> float:
        x = TangentPair(np.zeros_like(base.gbar), v_tt)
        general = second_variation_R(base, x, second_order_completion(base, x))
        return relative_error(sv_transverse_traceless(base, x.h, x.v), general)

    ctx.check(
        "tt-second-variation",
        "the TT form agrees with R'' on paths in A1",
        tol.second_variation,
        tt_against_general,
    )

    phi = 0.5 * real_harmonic(base.grid, 2, 0) + real_harmonic(base.grid, 3, 1)
    v_c = real_harmonic(base.grid, 1, 0) - 0.3 * real_harmonic(base.grid, 2, -2)

    def conformal_against_general() -> float:
        x = TangentPair(phi[..., None, None] * base.gbar, v_c)
        general = second_variation_R(base, x, second_order_completion(base, x))
        return relative_error(sv_conformal(base, phi, v_c), general)

    ctx.check(
        "conformal-second-variation",
        "R'' on conformal directions (phi gbar, v) is the quadratic form of the conformal block",
        tol.second_variation,
        conformal_against_general,
    )

    block = conformal_block_operator(base)
    ctx.check(
        "conformal-symbol",
        "the principal symbol of the conformal block has determinant -1",
        tol.consistency,
        lambda: abs(block.symbol_determinant + 1.0),
    )

    def constants() -> float:
        c1, c2 = 0.7, -0.4
        ones = np.ones(base.grid.shape)
        image = block.apply(c1 * ones, c2 * ones)
        expected = block.constant_image(c1, c2)
        return max(relative_error(image[k], np.full(base.grid.shape, expected[k])) for k in range(2))

    ctx.check(
        "conformal-constants",
        "on constants the conformal block is the shift by R_gbar / (n - 2)",
        tol.curvature,
        constants,
    )

    def symmetric() -> float:
        grid = base.grid
        phi1, v1, phi2, v2 = (random_scalar(grid, ctx.rng, 4) for _ in range(4))
        left = block.apply(phi1, v1)
        right = block.apply(phi2, v2)
        lhs = base.integrate(left[0] * phi2 + left[1] * v2)
        rhs = base.integrate(phi1 * right[0] + v1 * right[1])
        scale = max(
            np.sqrt(base.integrate(left[0] ** 2 + left[1] ** 2) * base.integrate(phi2**2 + v2**2)),
            np.sqrt(base.integrate(right[0] ** 2 + right[1] ** 2) * base.integrate(phi1**2 + v1**2)),
        )
        return float(abs(lhs - rhs) / scale)

    ctx.check(
        "conformal-symmetric",
        "the conformal block is symmetric, relative to the Cauchy-Schwarz bound of both pairings",
        tol.stokes,
        symmetric,
    )
    ctx.certify("conformal-block", {"symbol": block.symbol.tolist(), "shift": block.shift})


def _torus(ctx: SuiteContext) -> None:
    grid = TorusGrid(ctx.config.grid.n_lat, ctx.config.grid.n_lat)
    base = BackgroundData.flat_torus(grid)
    geo = base.geometry
    h = random_symmetric_tensor(geo, ctx.rng, 3)
    ctx.check(
        "torus-lichnerowicz",
        "on a flat metric the Lichnerowicz Laplacian is the rough Laplacian",
        ctx.tol.flat,
        lambda: relative_error(geo.lichnerowicz(h), geo.rough_laplacian(h)),
    )
    constant = np.broadcast_to(np.array([[0.4, 0.2], [0.2, -0.4]]), (*grid.shape, 2, 2)).copy()
    ctx.check(
        "torus-tt-constant",
        "parallel trace-free tensors on the flat torus are TT with vanishing R''",
        ctx.tol.flat,
        lambda: abs(sv_transverse_traceless(base, constant, np.zeros(grid.shape))),
    )


def run(ctx: SuiteContext) -> None:
    """Finite-difference checks, closed forms and the flat-torus sanity checks."""
    _fd_checks(ctx, ctx.base)
    _closed_forms(ctx, ctx.base)
    slope = BackgroundData.round_sphere(ctx.grid, ctx.config.cones.cone_slope**2)
    ctx.check(
        "scaling-slope",
        "the scaling-path value of A'' carries the factor b^3 for every b_inf",
        ctx.tol.consistency,
        lambda: _scaling_path_defect(slope),
    )
    _torus(ctx)
