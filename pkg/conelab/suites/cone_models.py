"""Green coordinate, A, Q and the level-set properties on warped and Eguchi-Hanson models."""

import numpy as np

from conelab.cones import (
    EguchiHansonModel,
    GreenProfile,
    WarpedModel,
    eguchi_hanson_model,
    eval_A_of_r,
    eval_Aprime,
    eval_Q_of_r,
    eval_R_levelset,
    level_data,
    preset,
    solve_green_radial,
    sweep_family,
    warp_family,
)
from conelab.cones.eguchi_hanson import B_INF
from conelab.cones.properties import sample_levels
from conelab.suites.base import SuiteContext

PRESETS = ("euclidean", "cone", "tanh", "polynomial")
# the polynomial warp bends back, so its outer levels leave the guarded neighborhood of the base
LEVELSET_PRESETS = ("euclidean", "cone", "tanh")
PROFILE_POINTS = 9
EH_RHO = (1.5, 3.0, 10.0)
EH_FAR_RHO = 100.0
EH_FAR_LEVEL = 100.0
EH_LEVELS = 8


def _interior(m: WarpedModel, count: int = PROFILE_POINTS) -> np.ndarray:
    return np.geomspace(m.s0 * 1.05, m.s1 * 0.95, count)


def _hessian_size(m: WarpedModel, gp: GreenProfile, levels: list[float]) -> float:
    """Largest |B_b| / |grad b|^2 over the levels."""
    return max(float(np.sqrt(d.norm2)) / d.b1**2 for d in (level_data(m, gp, r) for r in levels))


def _green_checks(ctx: SuiteContext, m: WarpedModel, gp: GreenProfile) -> None:
    tol = ctx.tol
    s = _interior(m)
    ctx.check(
        f"green-{m.name}",
        "b^(2-n) = G with G' = -f^(1-n), so b' = (b / f)^(n-1)",
        tol.green,
        lambda: max(gp.residual(float(x)) for x in s),
    )
    ctx.check(
        f"green-stokes-{m.name}",
        "the flux of grad G through every level is constant",
        tol.stokes,
        lambda: max(gp.stokes_residual(float(x)) for x in s),
    )
    ctx.check(
        f"green-trace-{m.name}",
        "Lap b^2 = 2n |grad b|^2 for b = G^(1/(2-n)) with G harmonic",
        tol.stokes,
        lambda: max(gp.trace_residual(float(x)) for x in s),
    )


def _exact_cone(ctx: SuiteContext, m: WarpedModel, gp: GreenProfile, slope: float) -> None:
    tol = ctx.tol
    n = m.n
    levels = sample_levels(gp, ctx.config.cones.radii)
    a_cone = m.area * slope ** (2 * (n - 1))
    ctx.check(
        f"b-inf-{m.name}",
        "the cone of slope a has |grad b| = a^2 everywhere",
        tol.cone,
        lambda: abs(gp.b_inf_estimate - slope**2) / slope**2,
    )
    ctx.check(
        f"A-{m.name}",
        "A is constant and equals Vol(S^(n-1)) a^(2(n-1)) on an exact cone",
        tol.cone,
        lambda: max(abs(eval_A_of_r(m, gp, r) / a_cone - 1.0) for r in levels),
    )

    ctx.check(
        f"B-vanishes-{m.name}",
        "Hess b^2 = 2 |grad b|^2 g on an exact cone",
        tol.cone,
        lambda: _hessian_size(m, gp, levels),
    )
    ctx.check(
        f"Q-{m.name}",
        "Q vanishes on an exact cone",
        tol.cone,
        lambda: max(eval_Q_of_r(m, gp, r).value for r in levels),
    )


def _warped_checks(ctx: SuiteContext, m: WarpedModel, gp: GreenProfile) -> None:
    tol = ctx.tol
    base = ctx.base
    levels = sample_levels(gp, ctx.config.cones.radii)
    ctx.check(
        f"R-levelset-{m.name}",
        "R(R^-2 g_R, |grad b|) on the grid matches A plus the B_b and ambient curvature terms",
        tol.levelset,
        lambda: max(eval_R_levelset(m, gp, r, base).difference for r in levels),
    )

    def normal_tangential() -> float:
        return max(float(np.max(np.abs(level_data(m, gp, r).b_normal_tangential))) for r in levels)

    ctx.check(
        f"B-normal-tangential-{m.name}",
        "rotational symmetry forces B_b(n, e_i) = 0",
        tol.consistency,
        normal_tangential,
    )
    values = [eval_A_of_r(m, gp, r) for r in levels]
    ctx.curve(f"A-{m.name}", levels, values, xlabel="r", ylabel="A(r)", logx=True)


def _transition(ctx: SuiteContext, m: WarpedModel, gp: GreenProfile, slope: float) -> None:
    tol = ctx.tol
    s = np.linspace(m.s0, m.s1, 4 * PROFILE_POINTS)
    ctx.flag(f"b-increasing-{m.name}", "b' = (b / f)^(n-1) > 0", lambda: bool(np.all(gp.db(s) > 0.0)))
    outer = np.linspace(0.5 * m.s1, m.s1, PROFILE_POINTS)
    ctx.check(
        f"end-slope-{m.name}",
        "once f is linear with slope a, |grad b| = a^2",
        tol.cone,
        lambda: float(np.max(np.abs(gp.db(outer) - slope**2))) / slope**2,
    )
    levels = sample_levels(gp, ctx.config.cones.radii)

    ctx.flag(
        f"B-nonzero-{m.name}",
        "a slope transition is not a cone, so B_b does not vanish",
        lambda: _hessian_size(m, gp, levels) > 1e-6,
    )
    q = [eval_Q_of_r(m, gp, r).value for r in levels]
    ctx.curve(f"Q-{m.name}", levels, q, xlabel="r", ylabel="Q(r)", logx=True, logy=True)
    ctx.curve(
        f"Aprime-{m.name}", levels, [eval_Aprime(m, gp, r) for r in levels], xlabel="r", ylabel="A'(r)", logx=True
    )


def _family(ctx: SuiteContext) -> None:
    tol = ctx.tol
    report = sweep_family(warp_family(ctx.config.cones), ctx.base, ctx.config.cones.radii)
    ctx.certify("family", {"models": report.names, "constants": report.constants})
    for kind in ("property4", "property5", "c1"):
        ctx.check(
            f"family-spread-{kind}",
            "the constant of the level-set bound does not degenerate along the family",
            tol.family_spread,
            lambda kind=kind: report.spread(kind),
        )
        ctx.flag(
            f"family-uniform-{kind}",
            "one constant serves every model and level of the family",
            lambda kind=kind: report.all_hold(kind),
        )


def _eguchi_hanson(ctx: SuiteContext, model: EguchiHansonModel) -> None:
    tol = ctx.tol
    ctx.check(
        "eh-ricci-flat",
        "the Eguchi-Hanson metric is Ricci flat",
        tol.ricci_flat,
        lambda: max(model.ricci_residual(rho * model.a) for rho in EH_RHO),
    )
    ctx.check(
        "eh-slope",
        "b / rho tends to 1 / sqrt 2",
        tol.ricci_flat,
        lambda: model.slope_residual(EH_FAR_RHO * model.a),
    )
    ctx.check(
        "eh-A-limit",
        "A tends to Vol(S^3 / Z_2) = pi^2 at infinity",
        tol.ricci_flat,
        lambda: abs(model.A(EH_FAR_LEVEL * model.a) / np.pi**2 - 1.0),
    )

    levels = np.geomspace(model.b(1.05 * model.a), 20.0 * model.a * B_INF, EH_LEVELS).tolist()
    a_values = [model.A(r) for r in levels]
    a_primes = [model.Aprime(r) for r in levels]
    q_values = [model.Q(r).value for r in levels]
    ctx.flag(
        "eh-A-monotone",
        "A is nonincreasing on a Ricci-flat manifold",
        lambda: bool(np.all(np.diff(a_values) <= tol.sequence_slack * np.abs(a_values[:-1]))),
    )
    ctx.flag("eh-Aprime-negative", "A' < 0 away from a cone", lambda: max(a_primes) < 0.0)
    ctx.flag(
        "eh-Q-monotone",
        "Q is nonincreasing",
        lambda: bool(np.all(np.diff(q_values) <= tol.sequence_slack * np.abs(q_values[:-1]))),
    )
    ctx.check(
        "eh-monotonicity-formula",
        "A'(r) = -r^(n-3) / 2 times the integral of b^(2-2n) |B_b|^2 over b >= r",
        tol.monotonicity_formula,
        lambda: max(model.monotonicity_residual(r) for r in levels),
    )
    ctx.curve("A-eguchi-hanson", levels, a_values, xlabel="r", ylabel="A(r)", logx=True)
    ctx.curve("Q-eguchi-hanson", levels, q_values, xlabel="r", ylabel="Q(r)", logx=True, logy=True)


def run(ctx: SuiteContext) -> None:
    """Presets, the warp family and Eguchi-Hanson."""
    cones = ctx.config.cones
    for name in PRESETS:
        m = preset(name, cones)
        gp = solve_green_radial(m)
        _green_checks(ctx, m, gp)
        if name in LEVELSET_PRESETS:
            _warped_checks(ctx, m, gp)
        if name == "euclidean":
            ctx.check(
                "b-euclidean",
                "b = |x| on Euclidean space",
                ctx.tol.cone,
                lambda m=m, gp=gp: float(np.max(np.abs(gp.b(_interior(m)) / _interior(m) - 1.0))),
            )
            _exact_cone(ctx, m, gp, 1.0)
            ctx.check(
                "R-euclidean",
                "R = A = Vol(S^2) on the level sets of Euclidean space",
                ctx.tol.levelset,
                lambda m=m, gp=gp: abs(eval_R_levelset(m, gp, 1.0, ctx.base).grid / (4.0 * np.pi) - 1.0),
            )
        elif name == "cone":
            _exact_cone(ctx, m, gp, cones.cone_slope)
        elif name == "tanh":
            _transition(ctx, m, gp, cones.cone_slope)

    _family(ctx)
    _eguchi_hanson(ctx, eguchi_hanson_model(cones.eguchi_hanson_a))
