"""First variations of curvature and of the functionals against finite differences."""

from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from conelab.errors import ConstraintError
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
    first_variation_B,
    first_variation_R,
    grad_A1,
    grad_R,
    project_gradient,
    psi_map,
)
from conelab.geometry.harmonics import random_scalar, random_symmetric_tensor
from conelab.geometry.tensors import MetricGeometry
from conelab.linearization import random_tangent
from conelab.suites.base import SuiteContext, refused
from conelab.variations import (
    constraint_derivatives,
    constraint_residuals,
    derivative,
    dhessian,
    dmetric_inverse,
    dnorm_gradient,
    dricci,
    dscalar_curvature,
    dvolume_form,
    lie_derivative_oracle,
    relative_error,
    second_order_completion,
)

PERTURBATION = 0.1
CHART_AMPLITUDE = 0.05


class Sample(NamedTuple):
    """A perturbed metric with a direction h, scalars u, v and a positive weight."""

    geo: MetricGeometry
    h: np.ndarray
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    def along(self, t: float) -> MetricGeometry:
        """Geometry of g + t h."""
        return MetricGeometry(self.geo.grid, self.geo.g + t * self.h)

    def pair(self, t: float = 0.0) -> WeightedPair:
        """(g + t h, w e^(t v))."""
        return WeightedPair(self.geo.grid, self.geo.g + t * self.h, self.w * np.exp(t * self.v))

    @property
    def direction(self) -> TangentPair:
        """(h, v)."""
        return TangentPair(self.h, self.v)


def _samples(base: BackgroundData, rng: np.random.Generator, count: int) -> list[Sample]:
    grid = base.grid
    out = []
    for _ in range(count):
        geo = MetricGeometry(grid, base.gbar + PERTURBATION * random_symmetric_tensor(base.geometry, rng, 3))
        h = random_symmetric_tensor(geo, rng, 3)
        u, v = random_scalar(grid, rng, 3), random_scalar(grid, rng, 3)
        w = np.exp(PERTURBATION * random_scalar(grid, rng, 3))
        out.append(Sample(geo, h, u, v, w))
    return out


def _gradient_norm2(geo: MetricGeometry, u: np.ndarray) -> np.ndarray:
    du = geo.gradient(u)
    return geo.inner_forms(du, du)


def _geometric_oracles(ctx: SuiteContext, samples: list[Sample]) -> None:
    steps = ctx.config.finite_difference.field_steps
    tol = ctx.tol.first_variation

    def worst(error: Callable[[Sample], float]) -> Callable[[], float]:
        return lambda: max(error(s) for s in samples)

    oracles: dict[str, tuple[str, Callable[[Sample], float]]] = {
        "dmetric-inverse": (
            "(g^-1)' = -g^-1 h g^-1",
            lambda s: relative_error(derivative(lambda t: s.along(t).inverse, steps), dmetric_inverse(s.geo, s.h)),
        ),
        "dnorm-gradient": (
            "(|grad u|^2)' = -h(grad u, grad u) + 2 <du, dv>",
            lambda s: relative_error(
                derivative(lambda t: _gradient_norm2(s.along(t), s.u + t * s.v), steps),
                dnorm_gradient(s.geo, s.h, s.u, s.v),
            ),
        ),
        "dvolume-form": (
            "(dmu)' = Tr h / 2 dmu",
            lambda s: relative_error(
                derivative(lambda t: s.along(t).density / s.geo.density, steps), dvolume_form(s.geo, s.h)
            ),
        ),
        "dscalar-curvature": (
            "R' = -<Ric, h> + delta^2 h - Lap Tr h",
            lambda s: relative_error(derivative(lambda t: s.along(t).scalar, steps), dscalar_curvature(s.geo, s.h)),
        ),
        "dricci": (
            "Ric' = -Lap h / 2 - R(h) + sym(Ric o h) + sym nabla delta h - Hess Tr h / 2",
            lambda s: relative_error(
                s.geo.to_frame(derivative(lambda t: s.along(t).ricci, steps)), s.geo.to_frame(dricci(s.geo, s.h))
            ),
        ),
        "dhessian": (
            "Hess' = Hess v - Gamma'(du)",
            lambda s: relative_error(
                s.geo.to_frame(derivative(lambda t: s.along(t).hessian(s.u + t * s.v), steps)),
                s.geo.to_frame(dhessian(s.geo, s.h, s.u, s.v)),
            ),
        ),
    }
    for name, (anchor, error) in oracles.items():
        ctx.check(name, anchor, tol, worst(error))

    def lie(index: int) -> float:
        defects = []
        for s in samples:
            vector = s.geo.gradient(s.u) + s.geo.rotate(s.geo.gradient(s.v))
            defects.append(lie_derivative_oracle(s.geo, vector)[index])
        return max(defects)

    ctx.check("lie-scalar", "along h = L_V g, R' = V(R)", ctx.tol.curvature, lambda: lie(0))
    ctx.check("lie-ricci", "along h = L_V g, Ric' = L_V Ric", ctx.tol.curvature, lambda: lie(1))


def _functional_oracles(ctx: SuiteContext, samples: list[Sample]) -> None:
    steps = ctx.config.finite_difference.first_steps
    tol = ctx.tol.first_variation
    functionals = {
        "A": (eval_A, first_variation_A, "A' = integral of w^3 (Tr h / 2 + 3v)"),
        "B": (eval_B, first_variation_B, "B' = integral of -<Ric, h> w + <h, Hess w> - Tr h Lap w + R w (Tr h / 2 + v)"),
        "R": (eval_R, first_variation_R, "R' = (A' - B' / (n - 2)) / (2 - n)"),
    }
    for name, (value, variation, anchor) in functionals.items():
        ctx.check(
            f"first-variation-{name}",
            anchor,
            tol,
            lambda value=value, variation=variation: max(
                relative_error(derivative(lambda t: value(s.pair(t)), steps), variation(s.pair(), s.direction))
                for s in samples
            ),
        )


def _base_values(ctx: SuiteContext, base: BackgroundData, tag: str) -> None:
    tol = ctx.tol.base_value
    p = base.base_pair
    b = base.b_inf
    four_pi = 4.0 * np.pi
    expected = {
        "A": (eval_A, b * four_pi, "A = b^3 Vol(gbar) = A_inf at the base pair"),
        "A1": (eval_A1, base.sphere_volume, "the base pair satisfies the volume constraint"),
        "B": (eval_B, 2.0 * b * four_pi, "B = R_gbar b Vol(gbar) at the base pair"),
        "R": (eval_R, base.a_inf, "R = A_inf at the base pair"),
    }
    for name, (value, target, anchor) in expected.items():
        ctx.check(f"base-{name}-{tag}", anchor, tol, lambda value=value, target=target: abs(value(p) / target - 1.0))

    ctx.check(
        f"criticality-{tag}",
        "the base pair is critical for R on A1",
        ctx.tol.criticality,
        lambda: base.norm(project_gradient(p, base)) / base.norm(grad_A1(p, base)),
    )
    ctx.check(
        f"grad-A1-base-{tag}",
        "grad A1 = (gbar / 2, 1) at the base pair",
        ctx.tol.consistency,
        lambda: base.norm(grad_A1(p, base) - base.constraint_normal) / base.norm(base.constraint_normal),
    )

    def tangent_variations() -> float:
        x = random_tangent(base, ctx.rng)
        a_prime = 2.0 * b**3 * base.integrate(x.v)
        b_prime = (2 - base.n) * b**3 * base.integrate(base.geometry.trace(x.h))
        scale = b**3 * base.integrate(np.abs(x.v))
        return max(abs(first_variation_A(p, x) - a_prime), abs(first_variation_B(p, x) - b_prime)) / scale

    ctx.check(
        f"tangent-variations-{tag}",
        "on tangent directions A' = 2 b^3 integral of v and B' = (2 - n) b^3 integral of Tr h",
        ctx.tol.first_variation,
        tangent_variations,
    )


def _psi_checks(ctx: SuiteContext, base: BackgroundData, samples: list[Sample]) -> None:
    tol = ctx.tol.consistency
    gbar = base.gbar

    def identity() -> float:
        return max(relative_error(psi_map(gbar, s.h, gbar), s.h) for s in samples)

    def scaling() -> float:
        c = 1.7
        return max(relative_error(psi_map(c * gbar, s.h, gbar), s.h / c**2) for s in samples)

    def duality() -> float:
        return max(
            relative_error(base.geometry.inner(s.h, psi_map(s.geo.g, s.h, gbar)), s.geo.inner(s.h, s.h)) for s in samples
        )

    ctx.check("psi-identity", "Psi is the identity at g = gbar", tol, identity)
    ctx.check("psi-scaling", "Psi(J) = c^-2 J at g = c gbar", tol, scaling)
    ctx.check("psi-duality", "<h, J>_g = <h, Psi(J)>_gbar", tol, duality)


def _gradient_checks(ctx: SuiteContext, base: BackgroundData) -> None:
    steps = ctx.config.finite_difference.first_steps
    rng = ctx.rng
    points = [exp_chart(random_tangent(base, rng, amplitude=CHART_AMPLITUDE), base) for _ in range(2)]
    directions = [random_tangent(base, rng) for _ in range(ctx.config.random_directions)]

    def along(p: WeightedPair, y: TangentPair, t: float) -> WeightedPair:
        return WeightedPair(p.grid, p.g + t * y.h, p.w * np.exp(t * y.v))

    def gradient_error(value: Callable[[WeightedPair], float], gradient: Callable[..., TangentPair]) -> float:
        errors = []
        for p in points:
            grad = gradient(p, base)
            for y in directions:
                fd = derivative(lambda t, p=p, y=y: value(along(p, y, t)), steps)
                errors.append(abs(base.l2_inner(grad, y) - fd) / (base.norm(grad) * base.norm(y)))
        return max(errors)

    ctx.check(
        "grad-R",
        "<grad R, y> is the derivative of R along (g + t h, w e^(tv))",
        ctx.tol.first_variation,
        lambda: gradient_error(eval_R, grad_R),
    )
    ctx.check(
        "grad-A1",
        "<grad A1, y> is the derivative of A1 along (g + t h, w e^(tv))",
        ctx.tol.first_variation,
        lambda: gradient_error(eval_A1, grad_A1),
    )

    def projection() -> float:
        errors = []
        for p in points:
            projected, normal = project_gradient(p, base), grad_A1(p, base)
            errors.append(abs(base.l2_inner(projected, normal)) / (base.norm(projected) * base.norm(normal)))
        return max(errors)

    ctx.check("projection-orthogonal", "the projected gradient is orthogonal to grad A1", ctx.tol.consistency, projection)


def _chart_checks(ctx: SuiteContext, base: BackgroundData) -> None:
    tol = ctx.tol
    steps = ctx.config.finite_difference.second_steps
    rng = ctx.rng
    tangents = [random_tangent(base, rng, amplitude=CHART_AMPLITUDE) for _ in range(ctx.config.random_inputs)]
    volume = base.sphere_volume

    ctx.check(
        "exp-in-A1",
        "the chart maps into A1",
        tol.constraint,
        lambda: max(abs(eval_A1(exp_chart(x, base)) / volume - 1.0) for x in tangents),
    )
    ctx.check(
        "exp-zero",
        "the chart sends 0 to the base pair",
        tol.consistency,
        lambda: float(
            max(
                np.max(np.abs(exp_chart(TangentPair.zeros(base.grid), base).g - base.gbar)),
                np.max(np.abs(exp_chart(TangentPair.zeros(base.grid), base).w - base.b_inf)),
            )
        ),
    )

    def linearization() -> float:
        errors = []
        for x in tangents:
            dg = derivative(lambda t, x=x: exp_chart(t * x, base).g, ctx.config.finite_difference.first_steps)
            dv = derivative(
                lambda t, x=x: np.log(exp_chart(t * x, base).w / base.b_inf), ctx.config.finite_difference.first_steps
            )
            errors.append(max(relative_error(dg, x.h), relative_error(dv, x.v)))
        return max(errors)

    ctx.check(
        "exp-linearization",
        "the differential of the chart at 0 is the identity on tangent vectors",
        tol.first_variation,
        linearization,
    )

    def exp_path() -> float:
        residuals = [constraint_derivatives(lambda t, x=x: exp_chart(t * x, base), base, steps) for x in tangents[:3]]
        return max(max(r) for r in residuals)

    ctx.check(
        "constraint-exp-path",
        "paths in A1 satisfy both the first and the second order constraint",
        tol.second_constraint,
        exp_path,
    )
    ctx.check(
        "constraint-constant-path",
        "the constant path has vanishing constraint derivatives",
        tol.consistency,
        lambda: max(constraint_derivatives(lambda _t: base.base_pair, base, steps)),
    )
    zero = TangentPair.zeros(base.grid)
    scaling = TangentPair(base.gbar, -np.ones(base.grid.shape))
    ctx.check(
        "constraint-scaling",
        "(gbar, -1) is tangent to A1 at the base pair",
        tol.consistency,
        lambda: constraint_residuals(base.base_pair, scaling, zero, volume).first,
    )

    def second_order() -> float:
        residuals = [
            constraint_residuals(base.base_pair, x, second_order_completion(base, x), volume) for x in tangents
        ]
        return max(max(r) for r in residuals)

    ctx.check(
        "constraint-second-order",
        "v' = -integral of (phi^2 - |h|^2 / 2) / 2 Vol completes a tangent x to second order",
        tol.consistency,
        second_order,
    )
    ctx.flag(
        "constraint-refusal",
        "a path leaving A1 is refused",
        lambda: refused(
            lambda: constraint_derivatives(
                lambda t: WeightedPair(base.grid, base.gbar, np.full(base.grid.shape, base.b_inf * (1.0 + t))), base, steps
            ),
            ConstraintError,
        ),
    )


def run(ctx: SuiteContext) -> None:
    """Geometric and functional first variations, base values, gradients and the chart."""
    base = ctx.base
    samples = _samples(base, ctx.rng, ctx.config.random_inputs)
    _geometric_oracles(ctx, samples)
    _functional_oracles(ctx, samples)
    _base_values(ctx, base, "unit")
    _base_values(ctx, BackgroundData.round_sphere(ctx.grid, ctx.config.cones.cone_slope**2), "slope")
    _psi_checks(ctx, base, samples)
    _gradient_checks(ctx, base)
    _chart_checks(ctx, base)
