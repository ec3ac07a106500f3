"""Gradients in the fixed inner product and the exponential chart onto A1.

Gradients are taken with respect to the inner product frozen at the base
pair, so a quantity <h, J>_g w dmu_g is rewritten through the Psi map and
the density ratio nu before it is read off as a gradient.
"""

import numpy as np

from conelab.errors import GuardError, MetricError
from conelab.functionals.background import BackgroundData
from conelab.functionals.energies import eval_A1, eval_R, weighted_volume_density
from conelab.functionals.pairs import TangentPair, WeightedPair
from conelab.geometry.fields import MetricField, SymTensorField, sym

GUARD_METRIC = 0.5
GUARD_WEIGHT = 0.5


def psi_map(g: MetricField, J: SymTensorField, gbar: MetricField) -> SymTensorField:
    """Psi(J) = gbar g^-1 J g^-1 gbar, so that <h, J>_g = <h, Psi(J)>_gbar."""
    if not (g.shape == J.shape == gbar.shape):
        msg = f"Psi map needs matching shapes, got {g.shape}, {J.shape}, {gbar.shape}"
        raise MetricError(msg)
    gi = np.linalg.inv(g)
    return sym(gbar @ gi @ J @ gi @ gbar)


def neighborhood_guard(p: WeightedPair, base: BackgroundData) -> None:
    """Refuse pairs too far from the base pair for the functionals to be trusted."""
    if np.any(p.w <= 0):
        msg = "weight is not positive"
        raise GuardError(msg)
    relative = np.linalg.eigvalsh(base.geometry.to_frame(p.g))
    if np.min(relative) <= GUARD_METRIC:
        msg = f"metric eigenvalue {np.min(relative):.4g} relative to the base is at most {GUARD_METRIC}"
        raise GuardError(msg)
    drift = np.max(np.abs(p.w / base.b_inf - 1.0))
    if drift >= GUARD_WEIGHT:
        msg = f"weight deviates from b_inf by {drift:.4g}, limit {GUARD_WEIGHT}"
        raise GuardError(msg)


def grad_R(p: WeightedPair, base: BackgroundData) -> TangentPair:
    """Gradient of R at (g, w)."""
    if np.any(p.w <= 0):
        msg = "weight is not positive"
        raise GuardError(msg)
    n = p.n
    geo = p.geometry
    nu = weighted_volume_density(p, base)
    w2 = p.w**2
    phi1 = 3.0 * w2 - geo.scalar / (n - 2)
    lap_w = geo.laplacian(p.w)
    J = (
        geo.ricci / (n - 2)
        - w2[..., None, None] * p.g
        + ((lap_w / p.w)[..., None, None] * p.g - geo.hessian(p.w) / p.w[..., None, None]) / (n - 2)
    )
    h = (0.5 * phi1[..., None, None] * psi_map(p.g, p.g, base.gbar) + psi_map(p.g, J, base.gbar)) * nu[..., None, None]
    return TangentPair(h, phi1 * nu) / (2 - n)


def grad_A1(p: WeightedPair, base: BackgroundData) -> TangentPair:
    """Gradient of A1 at (g, w): (Psi(g) / 2, 1) nu."""
    nu = weighted_volume_density(p, base)
    return TangentPair(0.5 * psi_map(p.g, p.g, base.gbar) * nu[..., None, None], nu)


def project_gradient(p: WeightedPair, base: BackgroundData) -> TangentPair:
    """The projection of grad R orthogonal to grad A1."""
    gr = grad_R(p, base)
    ga = grad_A1(p, base)
    norm2 = base.l2_inner(ga, ga)
    if norm2 <= 0:
        msg = "gradient of A1 vanishes"
        raise GuardError(msg)
    return gr - (base.l2_inner(gr, ga) / norm2) * ga


def exp_chart(x: TangentPair, base: BackgroundData) -> WeightedPair:
    """(gbar + h, c b e^v) with c chosen so that the pair lies in A1."""
    g = base.gbar + sym(x.h)
    raw = WeightedPair(base.grid, g, base.b_inf * np.exp(x.v))
    neighborhood_guard(raw, base)
    c = base.sphere_volume / eval_A1(raw)
    pair = WeightedPair(base.grid, g, c * raw.w)
    neighborhood_guard(pair, base)
    return pair


def dexp_chart(x: TangentPair, y: TangentPair, base: BackgroundData) -> TangentPair:
    """Differential of the chart at x applied to y, in the (h, v) convention."""
    ga = grad_A1(exp_chart(x, base), base)
    return TangentPair(y.h, y.v - base.l2_inner(ga, y) / base.sphere_volume)


def dexp_transpose(x: TangentPair, z: TangentPair, base: BackgroundData) -> TangentPair:
    """Adjoint of dexp_chart at x in the fixed inner product."""
    ga = grad_A1(exp_chart(x, base), base)
    weight = base.integrate(base.b_inf * z.v) / base.sphere_volume
    return z - weight * ga


def eval_G(x: TangentPair, base: BackgroundData) -> float:
    """G = R o exp."""
    return eval_R(exp_chart(x, base))


def grad_G(x: TangentPair, base: BackgroundData) -> TangentPair:
    """Gradient of G, the transpose of dexp applied to the projected gradient of R."""
    return dexp_transpose(x, project_gradient(exp_chart(x, base), base), base)
