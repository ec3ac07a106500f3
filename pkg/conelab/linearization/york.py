"""York splitting of symmetric 2-tensors on the cross-section.

h = h_tt + phi gbar + L_conf V, where L_conf V = L_V gbar - 2 div V gbar / (n - 1)
is the conformal Killing operator. The trace part is read off pointwise;
V is a minimum-norm least-squares fit of the trace-free part over gradient
and rotated-gradient 1-forms, weighted so that the fit is orthogonal in the
fixed inner product. Killing and conformal Killing fields lie in the null
space of the fit and are never selected.
"""

from dataclasses import dataclass
from functools import cache, cached_property

import numpy as np
from numpy.typing import NDArray

from conelab.errors import DecompositionError
from conelab.functionals.background import BackgroundData
from conelab.functionals.pairs import TangentPair
from conelab.geometry.fields import ScalarField, SymTensorField, VectorField
from conelab.geometry.harmonics import gradient_forms
from conelab.utils.logger import logger

DIVERGENCE_TOLERANCE = 1e-6
RCOND = 1e-10


def conformal_killing(base: BackgroundData, vector: VectorField) -> SymTensorField:
    """L_V gbar - 2 div V gbar / (n - 1)."""
    geo = base.geometry
    return geo.lie_derivative_metric(vector) - (2.0 / (base.n - 1)) * geo.vector_divergence(vector)[
        ..., None, None
    ] * base.gbar


class YorkSolver:
    """Least-squares machinery for one background and basis degree."""

    def __init__(self, base: BackgroundData, degree: int) -> None:
        """Initialize with a background and the harmonic degree of the 1-form basis."""
        self.base = base
        self.degree = degree

    @cached_property
    def forms(self) -> NDArray:
        """Stacked 1-form basis, shape (k, n_lat, n_lon, d)."""
        grads, rotated = gradient_forms(self.base.geometry, self.degree)
        return np.stack(grads + rotated)

    @cached_property
    def columns(self) -> NDArray:
        """L_conf of every basis form, shape (k, n_lat, n_lon, d, d)."""
        return np.stack([conformal_killing(self.base, v) for v in self.forms])

    @cached_property
    def row_weights(self) -> NDArray:
        """Square roots of 2 x the inner-product measure."""
        return np.sqrt(2.0 * self.base.measure).ravel()

    def vectorize(self, t: NDArray) -> NDArray:
        """Weighted frame components (T00, T01) of trace-free tensors, stacked as rows."""
        frame = self.base.geometry.to_frame(t)
        w = self.row_weights
        lead = frame.shape[: frame.ndim - 4]
        flat = frame.reshape(*lead, -1, 2, 2)
        return np.concatenate([flat[..., 0, 0] * w, flat[..., 0, 1] * w], axis=-1)

    @cached_property
    def design(self) -> NDArray:
        """Design matrix of the fit, one column per basis form."""
        return self.vectorize(self.columns).T

    @cached_property
    def pseudo_inverse(self) -> NDArray:
        """Minimum-norm least-squares solution operator."""
        return np.linalg.pinv(self.design, rcond=RCOND)

    def fit(self, trace_free: SymTensorField) -> NDArray:
        """Minimum-norm coefficients of the conformal Killing fit."""
        return self.pseudo_inverse @ self.vectorize(trace_free)


@cache
def york_solver(base: BackgroundData, degree: int) -> YorkSolver:
    """Shared solver per background and degree."""
    return YorkSolver(base, degree)


@dataclass(frozen=True, eq=False)
class YorkDecomposition:
    """The orthogonal triple and the vector field of a York splitting."""

    base: BackgroundData
    h: SymTensorField
    tt: SymTensorField
    trace_factor: ScalarField
    gauge: SymTensorField
    vector: VectorField

    @property
    def conformal(self) -> SymTensorField:
        """phi gbar."""
        return self.trace_factor[..., None, None] * self.base.gbar

    @cached_property
    def lie_factor(self) -> ScalarField:
        """phi' with h = h_tt + phi' gbar + L_V gbar."""
        div = self.base.geometry.vector_divergence(self.vector)
        return self.trace_factor - 2.0 * div / (self.base.n - 1)

    def _inner(self, a: SymTensorField, b: SymTensorField) -> float:
        zero = np.zeros(self.base.grid.shape)
        return self.base.l2_inner(TangentPair(a, zero), TangentPair(b, zero))

    @cached_property
    def scale(self) -> float:
        """Squared norm of h."""
        return max(self._inner(self.h, self.h), 1e-300)

    def reconstruction_residual(self) -> float:
        """|h - (h_tt + phi gbar + L_conf V)| / |h|."""
        diff = self.h - (self.tt + self.conformal + self.gauge)
        return float(np.sqrt(self._inner(diff, diff) / self.scale))

    def lie_residual(self) -> float:
        """|h - (h_tt + phi' gbar + L_V gbar)| / |h|."""
        lie = self.base.geometry.lie_derivative_metric(self.vector)
        diff = self.h - (self.tt + self.lie_factor[..., None, None] * self.base.gbar + lie)
        return float(np.sqrt(self._inner(diff, diff) / self.scale))

    def orthogonality(self) -> float:
        """Largest pairwise inner product of the triple relative to |h|^2."""
        parts = (self.tt, self.conformal, self.gauge)
        worst = 0.0
        for i in range(3):
            for j in range(i + 1, 3):
                worst = max(worst, abs(self._inner(parts[i], parts[j])) / self.scale)
        return worst

    def divergence_defect(self) -> float:
        """|delta h_tt| / |h| in the fixed inner product."""
        geo = self.base.geometry
        div = geo.divergence(self.tt)
        value = float(np.sum(geo.inner_forms(div, div) * self.base.measure))
        return float(np.sqrt(value / self.scale))

    def trace_defect(self) -> float:
        """Largest |Tr h_tt| relative to the size of h."""
        geo = self.base.geometry
        size = float(np.max(np.abs(geo.to_frame(self.h)))) or 1.0
        return float(np.max(np.abs(geo.trace(self.tt)))) / size


def york_decompose(
    h: SymTensorField,
    base: BackgroundData,
    degree: int = 10,
    tolerance: float = DIVERGENCE_TOLERANCE,
) -> YorkDecomposition:
    """Split h into TT, trace and conformal Killing parts."""
    base.grid.check(h)
    geo = base.geometry
    phi = geo.trace(h) / (base.n - 1)
    trace_free = h - phi[..., None, None] * base.gbar
    solver = york_solver(base, degree)
    coeffs = solver.fit(trace_free)
    vector = np.tensordot(coeffs, solver.forms, axes=1)
    gauge = np.tensordot(coeffs, solver.columns, axes=1)
    result = YorkDecomposition(base, h, trace_free - gauge, phi, gauge, vector)
    defect = result.divergence_defect()
    logger.debug(f"York fit with {len(coeffs)} forms: divergence defect {defect:.3e}")
    if defect > tolerance:
        msg = f"TT part has divergence {defect:.3e} > {tolerance:.1e}; raise the York degree"
        raise DecompositionError(msg)
    return result
