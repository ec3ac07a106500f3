"""Chart-based Riemannian tensor calculus on a grid.

`MetricGeometry` bundles a grid and a metric and computes, lazily and once,
everything derived from them: inverse, volume density, Christoffel symbols,
Riemann, Ricci and scalar curvature. Differential operators act on covariant
fields only, so the pole parity rules of the grid always apply.

Index conventions: dg[..., a, b, c] = d_c g_ab; gamma[..., d, a, b] is the
Christoffel symbol with upper index d; riemann[..., a, b, c, d] has
R_abab equal to sectional curvature times det g, and Ric_bd = g^ac R_abcd.
"""

from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from conelab.errors import GridMismatchError
from conelab.geometry.fields import (
    MetricField,
    ScalarField,
    SymTensorField,
    VectorField,
    sym,
    validate_metric,
)
from conelab.geometry.grid import Grid

_LETTERS = "ijklmnop"


class MetricGeometry:
    """Curvature and differential operators of a metric on a grid."""

    def __init__(self, grid: Grid, g: MetricField, *, validate: bool = True) -> None:
        """Initialize with a metric; validation names the first degenerate node."""
        if validate:
            validate_metric(grid, g)
        self.grid = grid
        self.g = g

    @property
    def dim(self) -> int:
        """Dimension of the cross-section."""
        return self.grid.dim

    def same_grid(self, other: "MetricGeometry") -> None:
        """Raise when two geometries live on different grids."""
        if other.grid is not self.grid and other.grid.shape != self.grid.shape:
            msg = f"{self.grid!r} and {other.grid!r} differ"
            raise GridMismatchError(msg)

    # -- metric algebra -------------------------------------------------

    @cached_property
    def inverse(self) -> SymTensorField:
        """Contravariant metric g^ab."""
        return sym(np.linalg.inv(self.g))

    @cached_property
    def density(self) -> ScalarField:
        """Chart volume density sqrt(det g)."""
        return np.sqrt(np.linalg.det(self.g))

    @cached_property
    def frame(self) -> NDArray:
        """Cholesky factor L with L L^T = g at each node."""
        return np.linalg.cholesky(self.g)

    @cached_property
    def frame_inverse(self) -> NDArray:
        """Inverse of the Cholesky factor."""
        return np.linalg.inv(self.frame)

    def to_frame(self, t: SymTensorField) -> SymTensorField:
        """Components of a covariant 2-tensor in the Cholesky orthonormal frame."""
        li = self.frame_inverse
        return np.einsum("...ia,...ab,...jb->...ij", li, t, li)

    def from_frame(self, t: SymTensorField) -> SymTensorField:
        """Chart components of a 2-tensor given in the orthonormal frame."""
        lo = self.frame
        return np.einsum("...ai,...ij,...bj->...ab", lo, t, lo)

    def compose(self, a: SymTensorField, b: SymTensorField) -> SymTensorField:
        """Operator product A g^-1 B, formed in the orthonormal frame."""
        return self.from_frame(self.to_frame(a) @ self.to_frame(b))

    def trace(self, h: SymTensorField) -> ScalarField:
        """Tr_g h = g^ab h_ab."""
        return np.einsum("...ab,...ab->...", self.inverse, h)

    def inner(self, a: SymTensorField, b: SymTensorField) -> ScalarField:
        """Pointwise <A, B>_g = g^ac g^bd A_ab B_cd."""
        gi = self.inverse
        return np.einsum("...ac,...bd,...ab,...cd->...", gi, gi, a, b)

    def inner_forms(self, a: VectorField, b: VectorField) -> ScalarField:
        """Pointwise <a, b>_g of 1-forms."""
        return np.einsum("...ab,...a,...b->...", self.inverse, a, b)

    def raise_index(self, a: VectorField) -> VectorField:
        """Components a^c = g^cd a_d."""
        return np.einsum("...cd,...d->...c", self.inverse, a)

    def raise_both(self, h: SymTensorField) -> SymTensorField:
        """Components h^ab."""
        gi = self.inverse
        return np.einsum("...ac,...cd,...db->...ab", gi, h, gi)

    def integrate(self, f: ScalarField) -> float:
        """Integral of a scalar against the volume form of g."""
        return self.grid.integrate(f, self.density)

    # -- connection and curvature --------------------------------------

    @cached_property
    def dg(self) -> NDArray:
        """First chart derivatives of the metric."""
        return self.grid.partials(self.g)

    @cached_property
    def christoffel_lower(self) -> NDArray:
        """Gamma_eab = (d_a g_be + d_b g_ae - d_e g_ab) / 2."""
        dg = self.dg
        return 0.5 * (
            np.einsum("...bea->...eab", dg)
            + np.einsum("...aeb->...eab", dg)
            - np.einsum("...abe->...eab", dg)
        )

    @cached_property
    def christoffel(self) -> NDArray:
        """Gamma^d_ab."""
        return np.einsum("...de,...eab->...dab", self.inverse, self.christoffel_lower)

    @cached_property
    def riemann(self) -> NDArray:
        """Fully covariant Riemann tensor."""
        ddg = self.grid.partials(self.dg)
        second = 0.5 * (
            np.einsum("...adbc->...abcd", ddg)
            + np.einsum("...bcad->...abcd", ddg)
            - np.einsum("...bdac->...abcd", ddg)
            - np.einsum("...acbd->...abcd", ddg)
        )
        gl = self.christoffel_lower
        gu = self.christoffel
        quadratic = np.einsum("...fbc,...fad->...abcd", gl, gu) - np.einsum(
            "...fbd,...fac->...abcd", gl, gu
        )
        return second + quadratic

    @cached_property
    def ricci(self) -> SymTensorField:
        """Ric_bd = g^ac R_abcd."""
        return sym(np.einsum("...ac,...abcd->...bd", self.inverse, self.riemann))

    @cached_property
    def scalar(self) -> ScalarField:
        """Scalar curvature."""
        return self.trace(self.ricci)

    # -- covariant differentiation --------------------------------------

    def covariant_derivative(self, t: NDArray) -> NDArray:
        """nabla of a covariant tensor; the derivative index is appended last."""
        rank = t.ndim - 2
        out = self.grid.partials(t)
        letters = _LETTERS[:rank]
        gamma = self.christoffel
        for slot in range(rank):
            t_idx = letters[:slot] + "z" + letters[slot + 1 :]
            g_idx = "z" + letters[slot] + "c"
            out = out - np.einsum(f"...{g_idx},...{t_idx}->...{letters}c", gamma, t)
        return out

    def gradient(self, u: ScalarField) -> VectorField:
        """Differential du as a 1-form."""
        return self.grid.partials(u)

    def hessian(self, u: ScalarField) -> SymTensorField:
        """Hess u = nabla du."""
        return sym(self.covariant_derivative(self.gradient(u)))

    def laplacian(self, u: ScalarField) -> ScalarField:
        """Trace of the Hessian."""
        return self.trace(self.hessian(u))

    def divergence(self, h: SymTensorField) -> VectorField:
        """(delta h)_b = g^ac nabla_c h_ab."""
        return np.einsum("...ac,...abc->...b", self.inverse, self.covariant_derivative(h))

    def vector_divergence(self, v: VectorField) -> ScalarField:
        """div V = g^ac nabla_c V_a."""
        return np.einsum("...ac,...ac->...", self.inverse, self.covariant_derivative(v))

    def double_divergence(self, h: SymTensorField) -> ScalarField:
        """delta^2 h."""
        return self.vector_divergence(self.divergence(h))

    def lie_derivative_metric(self, v: VectorField) -> SymTensorField:
        """L_V g = nabla_a V_b + nabla_b V_a."""
        nv = self.covariant_derivative(v)
        return nv + np.swapaxes(nv, -1, -2)

    def lie_derivative_scalar(self, v: VectorField, f: ScalarField) -> ScalarField:
        """V(f)."""
        return np.einsum("...c,...c->...", self.raise_index(v), self.gradient(f))

    def lie_derivative_tensor(self, v: VectorField, t: SymTensorField) -> SymTensorField:
        """L_V T for a covariant symmetric 2-tensor."""
        vu = self.raise_index(v)
        transport = np.einsum("...c,...abc->...ab", vu, self.covariant_derivative(t))
        m = np.einsum("...cd,...da->...ca", self.inverse, self.covariant_derivative(v))
        return (
            transport
            + np.einsum("...cb,...ca->...ab", t, m)
            + np.einsum("...ac,...cb->...ab", t, m)
        )

    def rough_laplacian(self, t: NDArray) -> NDArray:
        """g^cd nabla_d nabla_c T."""
        second = self.covariant_derivative(self.covariant_derivative(t))
        letters = _LETTERS[: t.ndim - 2]
        return np.einsum(f"...cd,...{letters}cd->...{letters}", self.inverse, second)

    def curvature_action(self, h: SymTensorField) -> SymTensorField:
        """(R h)_ij = R_ikjl h^kl."""
        return sym(np.einsum("...ikjl,...kl->...ij", self.riemann, self.raise_both(h)))

    def lichnerowicz(self, h: SymTensorField) -> SymTensorField:
        """Delta h + 2 R h with the rough Laplacian."""
        return sym(self.rough_laplacian(h) + 2.0 * self.curvature_action(h))

    def rotate(self, a: VectorField) -> VectorField:
        """Hodge rotation (*a)_a = sqrt(det g) eps_ab g^bc a_c of a 1-form."""
        au = self.raise_index(a)
        out = np.empty_like(a)
        out[..., 0] = self.density * au[..., 1]
        out[..., 1] = -self.density * au[..., 0]
        return out
