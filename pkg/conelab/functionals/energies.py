"""The functionals A, B, A1 and R and their first variations."""

import numpy as np

from conelab.errors import ConstraintError, GridMismatchError
from conelab.functionals.background import BackgroundData
from conelab.functionals.pairs import TangentPair, WeightedPair

VOLUME_TOLERANCE = 1e-10


def eval_A(p: WeightedPair) -> float:
    """A(g, w) = integral of w^3."""
    return p.geometry.integrate(p.w**3)


def eval_B(p: WeightedPair) -> float:
    """B(g, w) = integral of R_g w."""
    return p.geometry.integrate(p.geometry.scalar * p.w)


def eval_A1(p: WeightedPair) -> float:
    """A1(g, w) = integral of w."""
    return p.geometry.integrate(p.w)


def eval_R(p: WeightedPair) -> float:
    """R = (A - B / (n - 2)) / (2 - n)."""
    n = p.n
    if n <= 2:
        msg = f"R is undefined in ambient dimension {n}"
        raise GridMismatchError(msg)
    return (eval_A(p) - eval_B(p) / (n - 2)) / (2 - n)


def in_A1(p: WeightedPair, base: BackgroundData, tol: float = VOLUME_TOLERANCE) -> bool:
    """Whether the weighted volume equals the constraint volume."""
    return abs(eval_A1(p) - base.sphere_volume) <= tol * base.sphere_volume


def require_A1(p: WeightedPair, base: BackgroundData, tol: float = VOLUME_TOLERANCE) -> None:
    """Raise when a pair is off the constraint set."""
    if not in_A1(p, base, tol):
        msg = f"pair violates the volume constraint: A1 = {eval_A1(p):.15g}, expected {base.sphere_volume:.15g}"
        raise ConstraintError(msg)


def first_variation_A(p: WeightedPair, x: TangentPair) -> float:
    """A' along (g + t h, w e^{tv}): integral of w^3 (Tr h / 2 + 3 v)."""
    geo = p.geometry
    return geo.integrate(p.w**3 * (0.5 * geo.trace(x.h) + 3.0 * x.v))


def first_variation_B(p: WeightedPair, x: TangentPair) -> float:
    """B' = integral of -<Ric, h> w + <h, Hess w> - Tr h Lap w + R w (Tr h / 2 + v)."""
    geo = p.geometry
    tr = geo.trace(x.h)
    integrand = (
        -geo.inner(geo.ricci, x.h) * p.w
        + geo.inner(x.h, geo.hessian(p.w))
        - tr * geo.laplacian(p.w)
        + geo.scalar * p.w * (0.5 * tr + x.v)
    )
    return geo.integrate(integrand)


def first_variation_R(p: WeightedPair, x: TangentPair) -> float:
    """R' assembled from A' and B'."""
    n = p.n
    return (first_variation_A(p, x) - first_variation_B(p, x) / (n - 2)) / (2 - n)


def weighted_volume_density(p: WeightedPair, base: BackgroundData) -> np.ndarray:
    """nu = w sqrt(det g) / (b sqrt(det gbar))."""
    return p.w * p.geometry.density / (base.b_inf * base.geometry.density)
