"""Second variations at the base pair.

Paths are (gbar + t h + t^2 h'/2, b exp(t v + t^2 v')). All traces, norms
and operators refer to gbar, and integrals are taken against dmu_gbar.
"""

import numpy as np

from conelab.errors import ConstraintError
from conelab.functionals.background import BackgroundData
from conelab.functionals.pairs import TangentPair
from conelab.geometry.fields import ScalarField, SymTensorField

TT_TOLERANCE = 1e-8
TANGENCY_TOLERANCE = 1e-10


def _einstein_constant(base: BackgroundData) -> float:
    """c with Ric_gbar = c gbar."""
    return base.ricci_constant * base.b_inf**2


def second_variation_A(base: BackgroundData, x: TangentPair, xprime: TangentPair) -> float:
    """A'' = b^3 integral of (3v + Tr h / 2)^2 + 6v' + Tr h' / 2 - |h|^2 / 2."""
    geo = base.geometry
    integrand = (
        (3.0 * x.v + 0.5 * geo.trace(x.h)) ** 2
        + 6.0 * xprime.v
        + 0.5 * geo.trace(xprime.h)
        - 0.5 * geo.inner(x.h, x.h)
    )
    return base.b_inf**3 * base.integrate(integrand)


def second_variation_B(base: BackgroundData, x: TangentPair, xprime: TangentPair) -> float:
    """B'' at an Einstein base, after integration by parts."""
    geo = base.geometry
    n = base.n
    c = _einstein_constant(base)
    h, v = x.h, x.v
    tr = geo.trace(h)
    phi = 0.5 * tr + v
    div_h = geo.divergence(h)
    integrand = (
        0.5 * geo.inner(geo.rough_laplacian(h), h)
        + geo.inner(geo.curvature_action(h), h)
        - geo.inner(geo.covariant_derivative(div_h), h)
        + 0.5 * geo.inner(geo.hessian(tr), h)
        + geo.inner(h, geo.hessian(v))
        - tr * geo.laplacian(v)
        + (geo.vector_divergence(div_h) - geo.laplacian(tr)) * phi
        + c * ((n - 1) * phi - 2.0 * tr) * phi
        + c * (0.5 * (n - 3) * (geo.trace(xprime.h) - geo.inner(h, h)) + 2.0 * (n - 1) * xprime.v)
    )
    return base.b_inf * base.integrate(integrand)


def second_variation_R(base: BackgroundData, x: TangentPair, xprime: TangentPair) -> float:
    """R'' assembled from A'' and B''."""
    n = base.n
    return (second_variation_A(base, x, xprime) - second_variation_B(base, x, xprime) / (n - 2)) / (2 - n)


def tt_defect(base: BackgroundData, h: SymTensorField) -> float:
    """Largest trace or divergence of h relative to the size of h."""
    geo = base.geometry
    scale = float(np.max(np.abs(geo.to_frame(h))))
    if scale == 0.0:
        return 0.0
    div = geo.divergence(h)
    return max(
        float(np.max(np.abs(geo.trace(h)))),
        float(np.sqrt(np.max(geo.inner_forms(div, div)))),
    ) / scale


def sv_transverse_traceless(base: BackgroundData, h: SymTensorField, v: ScalarField) -> float:
    """R'' along a TT direction: (2-n) R'' = -b integral of <L h, h> / (2(n-2)) - 6 b^2 v^2."""
    n = base.n
    b = base.b_inf
    defect = tt_defect(base, h)
    if defect > TT_TOLERANCE:
        msg = f"variation is not transverse traceless (defect {defect:.3e})"
        raise ConstraintError(msg)
    if abs(base.integrate(b * v)) > TANGENCY_TOLERANCE * max(1.0, base.integrate(b * np.abs(v))):
        msg = "v must have zero mean for a TT variation to be tangent"
        raise ConstraintError(msg)
    geo = base.geometry
    integrand = geo.inner(geo.lichnerowicz(h), h) / (2.0 * (n - 2)) - 6.0 * b**2 * v**2
    return -b * base.integrate(integrand) / (2 - n)


class ConformalBlockOperator:
    """Symmetric 2x2 operator governing R'' on conformal directions (phi gbar, v).

    With D = Lap + R_gbar / (n - 2) it reads [[(n-3)/2 D, D], [D, 6 b^2]].
    """

    def __init__(self, base: BackgroundData) -> None:
        """Initialize with the base pair."""
        self.base = base
        n = base.n
        self.shift = (n - 1) * _einstein_constant(base) / (n - 2)

    @property
    def symbol(self) -> np.ndarray:
        """Principal symbol matrix."""
        n = self.base.n
        return np.array([[0.5 * (n - 3), 1.0], [1.0, 0.0]])

    @property
    def symbol_determinant(self) -> float:
        """Determinant of the principal symbol; -1 for every n."""
        s = self.symbol
        return float(s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0])

    def _d(self, f: ScalarField) -> ScalarField:
        return self.base.geometry.laplacian(f) + self.shift * f

    def apply(self, phi: ScalarField, v: ScalarField) -> tuple[ScalarField, ScalarField]:
        """Image of (phi, v)."""
        n = self.base.n
        b = self.base.b_inf
        d_phi = self._d(phi)
        return 0.5 * (n - 3) * d_phi + self._d(v), d_phi + 6.0 * b**2 * v

    def constant_image(self, c1: float, c2: float) -> tuple[float, float]:
        """Image of constants, where the Laplacian vanishes."""
        n = self.base.n
        b = self.base.b_inf
        return 0.5 * (n - 3) * self.shift * c1 + self.shift * c2, self.shift * c1 + 6.0 * b**2 * c2

    def quadratic_form(self, phi: ScalarField, v: ScalarField) -> float:
        """b times the integral of (phi, v) . L(phi, v); equals (2 - n) R''."""
        first, second = self.apply(phi, v)
        return self.base.b_inf * self.base.integrate(phi * first + v * second)


def conformal_block_operator(base: BackgroundData) -> ConformalBlockOperator:
    """The conformal block at the base pair."""
    return ConformalBlockOperator(base)


def sv_conformal(base: BackgroundData, phi: ScalarField, v: ScalarField) -> float:
    """R'' along the conformal direction (phi gbar, v)."""
    n = base.n
    b = base.b_inf
    residual = base.integrate(b * (0.5 * (n - 1) * phi + v))
    if abs(residual) > TANGENCY_TOLERANCE * max(1.0, base.integrate(b * (np.abs(phi) + np.abs(v)))):
        msg = f"conformal direction is not tangent to A1 (residual {residual:.3e})"
        raise ConstraintError(msg)
    return ConformalBlockOperator(base).quadratic_form(phi, v) / (2 - n)
