"""Reduction, exponent and flow experiments on synthetic objectives and on G = R o exp."""

import numpy as np
from numpy.typing import NDArray

from conelab.errors import ConstraintError
from conelab.linearization import DIFFEO, assemble_L, build_variation_basis, kernel_of_L
from conelab.lojasiewicz import (
    ChartObjective,
    DegenerateModel,
    Objective,
    QuadraticModel,
    QuarticModel,
    ReducedProblem,
    build_reduction,
    estimate_exponent,
    gradient_flow,
    inequality_violation,
    lipschitz_ratio,
    sample_directions,
)
from conelab.models.base import ExponentEstimate
from conelab.suites.base import SuiteContext, refused
from conelab.variations import derivative, relative_error

FLOW_START = 0.5
CHART_START = 0.2
# increments of G^(-1/2) under descent on |x|^4 tend to 8 step
POLYNOMIAL_SLACK = 0.05


def _points(ctx: SuiteContext, dim: int, radius: float) -> list[NDArray]:
    """Random points with norms in [radius / 10, radius]."""
    count = ctx.config.lojasiewicz.reduction_samples
    d = ctx.rng.standard_normal((count, dim))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return [r * v for r, v in zip(ctx.rng.uniform(0.1, 1.0, count) * radius, d, strict=True)]


def _reduction(ctx: SuiteContext, name: str, objective: Objective, kernel: NDArray) -> ReducedProblem:
    cfg = ctx.config.lojasiewicz
    tol = ctx.tol
    problem = build_reduction(
        objective, kernel, cfg.newton_tol, cfg.newton_max_iter, ctx.config.finite_difference.first_steps
    )
    points = _points(ctx, objective.dim, cfg.radius)
    ctx.check(
        f"phi-zero-{name}",
        "Phi(0) = 0",
        tol.reduction,
        lambda: float(np.linalg.norm(problem.phi(np.zeros(objective.dim)))),
    )
    ctx.check(
        f"reduction-identities-{name}",
        "N(Phi(y)) = y and Phi(N(y)) = y",
        tol.reduction,
        lambda: max(max(problem.identity_defects(y)) for y in points),
    )
    ctx.certify(
        f"reduction-{name}",
        {
            "kernel_dim": problem.kernel_dim,
            "invertibility": problem.invertibility(),
            "lipschitz": lipschitz_ratio(problem, np.array(points)),
        },
    )
    return problem


def _exponent(ctx: SuiteContext, name: str, problem: ReducedProblem) -> ExponentEstimate:
    cfg = ctx.config.lojasiewicz
    estimate = estimate_exponent(
        problem, cfg.radius, cfg.samples, ctx.config.seed, cfg.slope_tol, cfg.reduction_samples
    )
    ctx.certify(f"exponent-{name}", estimate)
    directions = sample_directions(problem.objective.dim, cfg.samples, ctx.config.seed)
    ctx.check(
        f"inequality-{name}",
        "|G(x) - G(0)|^(2 - alpha) <= C |grad G(x)|^2 on every sample with the fitted alpha and C",
        ctx.tol.consistency,
        lambda: max(inequality_violation(problem, estimate, r * d) for d in directions for r in estimate.radii),
    )
    ctx.flag(
        f"reduction-chain-{name}",
        "|f(Pi_K x) - G(0)|^(2 - alpha) <= C |grad G(x)|^2 with a finite C",
        lambda: bool(np.isfinite(estimate.chain_constant) and np.isfinite(estimate.f_constant)),
    )
    return estimate


def _synthetic(ctx: SuiteContext) -> None:
    cfg = ctx.config.lojasiewicz
    tol = ctx.tol
    dim = cfg.synthetic_dim

    quadratic = _reduction(ctx, "quadratic", QuadraticModel(dim), np.zeros((dim, 0)))
    est = _exponent(ctx, "quadratic", quadratic)
    ctx.check("exponent-quadratic", "|x|^2 has exponent 1", tol.exponent, lambda: abs(est.alpha_hat - 1.0))

    quartic = _reduction(ctx, "quartic", QuarticModel(dim), np.eye(dim))
    est_quartic = _exponent(ctx, "quartic", quartic)
    ctx.check(
        "exponent-quartic", "|x|^4 has exponent 1/2", tol.exponent, lambda: abs(est_quartic.alpha_hat - 0.5)
    )

    model = DegenerateModel(dim, cfg.synthetic_kernel)
    degenerate = _reduction(ctx, "degenerate", model, model.kernel())
    est_degenerate = _exponent(ctx, "degenerate", degenerate)
    ctx.flag(
        "exponent-degenerate",
        "|x_K|^4 + |x_perp|^2 satisfies the inequality with exponent 1/2",
        lambda: est_degenerate.alpha_hat >= 0.5 - tol.exponent,
    )

    def reduced_is_quartic() -> float:
        # f(z) = |x_K|^4 with x_K + 4 |x_K|^2 x_K = z
        worst = 0.0
        for y in _points(ctx, cfg.synthetic_kernel, cfg.radius):
            xk = degenerate.phi(model.kernel() @ y)[: cfg.synthetic_kernel]
            worst = max(worst, relative_error(xk + 4.0 * (xk @ xk) * xk, y))
            worst = max(worst, relative_error(degenerate.f(y), float((xk @ xk) ** 2)))
        return worst

    ctx.check("reduced-degenerate", "the reduced function is |x_K|^4 on the kernel", tol.reduction, reduced_is_quartic)


def _flows(ctx: SuiteContext) -> None:
    cfg = ctx.config.lojasiewicz
    dim = cfg.synthetic_dim
    step = cfg.flow_step
    x0 = ctx.rng.standard_normal(dim)
    x0 *= FLOW_START / np.linalg.norm(x0)

    quadratic = gradient_flow(QuadraticModel(dim), x0, step, cfg.flow_iters)
    ctx.check(
        "flow-quadratic-rate",
        "descent on |x|^2 contracts G by (1 - 2 step)^2 per iteration",
        ctx.tol.flow_rate,
        lambda: max(abs(r - (1.0 - 2.0 * step) ** 2) for r in quadratic.rates()),
    )
    ctx.curve("flow-quadratic", list(range(len(quadratic.values))), quadratic.values, xlabel="k", ylabel="G", logy=True)

    fixed = gradient_flow(QuadraticModel(dim), np.zeros(dim), step, cfg.flow_iters)
    ctx.flag(
        "flow-fixed-point",
        "the origin is a fixed point of the descent",
        lambda: fixed.stopped == "stationary" and max(fixed.distances) == 0.0,
    )

    quartic = gradient_flow(QuarticModel(dim), x0, step, cfg.flow_iters)

    def polynomial() -> bool:
        inverse = np.asarray(quartic.values) ** -0.5
        increment = float(inverse[-1] - inverse[-2])
        return quartic.monotone and abs(increment / (8.0 * step) - 1.0) <= POLYNOMIAL_SLACK

    ctx.flag("flow-quartic-polynomial", "descent on |x|^4 decays like 1 / (8 step k)^2", polynomial)
    ctx.curve("flow-quartic", list(range(len(quartic.values))), quartic.values, xlabel="k", ylabel="G", logy=True)


def _chart(ctx: SuiteContext) -> None:
    cfg = ctx.config
    tol = ctx.tol
    base = ctx.base
    steps = cfg.finite_difference.first_steps
    basis = build_variation_basis(base, cfg.grid.degree, cfg.grid.york_degree)
    operator = assemble_L(basis, steps)
    objective = ChartObjective(base, basis, operator)
    origin = np.zeros(objective.dim)

    ctx.check(
        "chart-G-base",
        "G(0) = A_inf",
        tol.base_value,
        lambda: abs(objective.value(origin) / base.a_inf - 1.0),
    )
    ctx.check(
        "chart-grad-base",
        "grad G(0) = 0",
        tol.criticality,
        lambda: float(np.linalg.norm(objective.gradient(origin))) / base.a_inf,
    )

    def directional() -> float:
        worst = 0.0
        for x in _points(ctx, objective.dim, cfg.lojasiewicz.radius)[:3]:
            y = ctx.rng.standard_normal(objective.dim)
            fd = derivative(lambda t, x=x, y=y: objective.value(x + t * y), steps)
            worst = max(worst, relative_error(objective.directional(x, objective.embed(y)), fd))
        return worst

    ctx.check("chart-directional", "<grad G(x), y> matches the derivative of G along y", tol.first_variation, directional)

    gauge = basis.indices(DIFFEO)
    if gauge:
        ctx.flag(
            "chart-gauge-refused",
            "directions along diffeomorphisms are outside the coordinate space",
            lambda: refused(lambda: objective.directional(origin, basis.elements[gauge[0]]), ConstraintError),
        )

    kernel = kernel_of_L(operator, cfg.lojasiewicz.kernel_threshold)
    problem = _reduction(ctx, "chart", objective, objective.restrict(kernel))
    _exponent(ctx, "chart", problem)

    x0 = ctx.rng.standard_normal(objective.dim)
    x0 *= CHART_START * cfg.lojasiewicz.radius / np.linalg.norm(x0)
    flow = gradient_flow(objective, x0, cfg.lojasiewicz.flow_step, cfg.lojasiewicz.flow_iters)
    ctx.flag("chart-flow-monotone", "G is nonincreasing along the safeguarded descent", lambda: flow.monotone)
    ctx.certify(
        "chart-flow",
        {"steps": len(flow.values) - 1, "final_step": flow.step, "halvings": flow.halvings, "stopped": flow.stopped},
    )
    drop = [v - base.a_inf for v in flow.values]
    ctx.curve("flow-chart", list(range(len(drop))), drop, xlabel="k", ylabel="G - A_inf", logy=True)


def run(ctx: SuiteContext) -> None:
    """Synthetic models first, then the chart objective at the round base."""
    _synthetic(ctx)
    _flows(ctx)
    _chart(ctx)
