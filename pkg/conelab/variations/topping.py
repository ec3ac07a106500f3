"""First variations of geometric quantities along g + t h.

Each function takes the geometry of g and returns the t-derivative at t = 0.
Products such as Ric o h are formed in the Cholesky orthonormal frame, where
upper and lower indices agree.
"""

import numpy as np

from conelab.geometry.fields import ScalarField, SymTensorField, VectorField, sym
from conelab.geometry.tensors import MetricGeometry
from conelab.variations.finite_difference import relative_error


def dmetric_inverse(geo: MetricGeometry, h: SymTensorField) -> SymTensorField:
    """(g^ij)' = -g^-1 h g^-1."""
    return -geo.raise_both(h)


def dnorm_gradient(geo: MetricGeometry, h: SymTensorField, u: ScalarField, v: ScalarField) -> ScalarField:
    """(|grad u|^2)' with u varying as u + t v: -h(grad u, grad u) + 2 <du, dv>."""
    du = geo.gradient(u)
    up = geo.raise_index(du)
    return -np.einsum("...ab,...a,...b->...", h, up, up) + 2.0 * geo.inner_forms(du, geo.gradient(v))


def dvolume_form(geo: MetricGeometry, h: SymTensorField) -> ScalarField:
    """(dmu)' / dmu = Tr h / 2."""
    return 0.5 * geo.trace(h)


def _scalar_terms(geo: MetricGeometry, h: SymTensorField) -> list[ScalarField]:
    return [-geo.inner(geo.ricci, h), geo.double_divergence(h), -geo.laplacian(geo.trace(h))]


def dscalar_curvature(geo: MetricGeometry, h: SymTensorField) -> ScalarField:
    """R' = -<Ric, h> + delta^2 h - Lap Tr h."""
    return sum(_scalar_terms(geo, h))


def _ricci_terms(geo: MetricGeometry, h: SymTensorField) -> list[SymTensorField]:
    ric_h = geo.compose(geo.ricci, h)
    return [
        -0.5 * geo.rough_laplacian(h),
        -geo.curvature_action(h),
        0.5 * (ric_h + np.swapaxes(ric_h, -1, -2)),
        0.5 * geo.lie_derivative_metric(geo.divergence(h)),
        -0.5 * geo.hessian(geo.trace(h)),
    ]


def dricci(geo: MetricGeometry, h: SymTensorField) -> SymTensorField:
    """Ric' = -Lap h / 2 - R h + (Ric o h + h o Ric) / 2 + sym nabla delta h - Hess Tr h / 2."""
    return sym(sum(_ricci_terms(geo, h)))


def dhessian(geo: MetricGeometry, h: SymTensorField, u: ScalarField, v: ScalarField) -> SymTensorField:
    """Hess' = Hess v - Gamma'(du) with Gamma'_ij^l = (nabla_i h_jl + nabla_j h_il - nabla_l h_ij) / 2."""
    nh = geo.covariant_derivative(h)
    dgamma = 0.5 * (
        np.einsum("...jli->...ijl", nh) + np.einsum("...ilj->...ijl", nh) - nh
    )
    grad_u = geo.raise_index(geo.gradient(u))
    return sym(geo.hessian(v) - np.einsum("...ijl,...l->...ij", dgamma, grad_u))


def _sup(fields: list[np.ndarray]) -> float:
    return max(float(np.max(np.abs(f))) for f in fields)


def lie_derivative_oracle(geo: MetricGeometry, vector: VectorField) -> tuple[float, float]:
    """Defects of R' = V(R) and Ric' = L_V Ric along h = L_V g.

    Each defect is relative to the largest term of the variation formula.
    On a metric of constant scalar curvature V(R) vanishes while the terms
    of R' do not.
    """
    h = geo.lie_derivative_metric(vector)
    scalar_terms = _scalar_terms(geo, h)
    scalar_reference = geo.lie_derivative_scalar(vector, geo.scalar)
    scalar_defect = relative_error(
        sum(scalar_terms), scalar_reference, scale=_sup([*scalar_terms, scalar_reference])
    )
    ricci_terms = [geo.to_frame(t) for t in _ricci_terms(geo, h)]
    ricci_reference = geo.to_frame(geo.lie_derivative_tensor(vector, geo.ricci))
    ricci_defect = relative_error(
        geo.to_frame(dricci(geo, h)), ricci_reference, scale=_sup([*ricci_terms, ricci_reference])
    )
    return scalar_defect, ricci_defect
