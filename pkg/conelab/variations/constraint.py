"""First and second order constraints on paths inside A1."""

from collections.abc import Callable
from typing import NamedTuple

import numpy as np

from conelab.functionals.background import BackgroundData
from conelab.functionals.energies import require_A1
from conelab.functionals.pairs import TangentPair, WeightedPair
from conelab.variations.finite_difference import derivative, second_derivative

PairPath = Callable[[float], WeightedPair]


class ConstraintResiduals(NamedTuple):
    """Relative residuals of the two constraint integrals."""

    first: float
    second: float


def constraint_residuals(p: WeightedPair, x: TangentPair, xprime: TangentPair, volume: float) -> ConstraintResiduals:
    """Constraint integrals of the path (g + t h + t^2 h'/2, w exp(t v + t^2 v')).

    first:  integral of (Tr h / 2 + v) w
    second: integral of (phi^2 + Tr h' / 2 - |h|^2 / 2 + 2 v') w, phi = Tr h / 2 + v
    """
    geo = p.geometry
    phi = 0.5 * geo.trace(x.h) + x.v
    first = geo.integrate(phi * p.w)
    second = geo.integrate(
        (phi**2 + 0.5 * geo.trace(xprime.h) - 0.5 * geo.inner(x.h, x.h) + 2.0 * xprime.v) * p.w
    )
    return ConstraintResiduals(abs(first) / volume, abs(second) / volume)


def path_data(path: PairPath, steps: tuple[float, ...]) -> tuple[WeightedPair, TangentPair, TangentPair]:
    """Recover (p0, (h, v), (h', v')) from a sampled path by finite differences in t."""
    cache: dict[float, WeightedPair] = {}

    def at(t: float) -> WeightedPair:
        if t not in cache:
            cache[t] = path(t)
        return cache[t]

    p0 = at(0.0)

    def log_weight(t: float) -> np.ndarray:
        return np.log(at(t).w / p0.w)

    h = derivative(lambda t: at(t).g, steps)
    hprime = second_derivative(lambda t: at(t).g, steps)
    v = derivative(log_weight, steps)
    vprime = 0.5 * second_derivative(log_weight, steps)
    return p0, TangentPair(h, v), TangentPair(hprime, vprime)


def constraint_derivatives(path: PairPath, base: BackgroundData, steps: tuple[float, ...]) -> ConstraintResiduals:
    """Evaluate both constraints at t = 0 after checking that the sampled path stays in A1."""
    for t in (0.0, *steps, *(-s for s in steps)):
        require_A1(path(t), base)
    p0, x, xprime = path_data(path, steps)
    return constraint_residuals(p0, x, xprime, base.sphere_volume)


def second_order_completion(base: BackgroundData, x: TangentPair) -> TangentPair:
    """x' = (0, c) completing a tangent x at the base pair to a path in A1 up to second order."""
    geo = base.geometry
    phi = 0.5 * geo.trace(x.h) + x.v
    volume = base.integrate(np.ones(base.grid.shape))
    c = -base.integrate(phi**2 - 0.5 * geo.inner(x.h, x.h)) / (2.0 * volume)
    return TangentPair(np.zeros_like(x.h), np.full(base.grid.shape, c))
