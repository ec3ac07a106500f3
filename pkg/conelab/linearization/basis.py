"""Truncated tangent space of A1 at the base pair.

Elements come in three groups, in this order:

    diffeo      (L_V gbar, 0) for gradient and rotated-gradient fields V
    conformal   (Y gbar, 0) and (0, Y), with the diffeo span and the
                constraint normal projected out
    TT          TT parts of products dY dY that survive the York split

Each group is Gram-Schmidt orthonormalized in the fixed inner product.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from conelab.errors import DecompositionError
from conelab.functionals.background import BackgroundData
from conelab.functionals.pairs import TangentPair
from conelab.geometry.fields import outer
from conelab.geometry.grid import SphereGrid
from conelab.geometry.harmonics import (
    gradient_forms,
    harmonic_indices,
    random_scalar,
    random_symmetric_tensor,
    real_harmonic,
    torus_mode,
)
from conelab.linearization.second_variation import tt_defect
from conelab.linearization.york import york_decompose
from conelab.utils.logger import logger

DIFFEO = "diffeo"
CONFORMAL = "conformal"
TT = "TT"
LABELS = (TT, CONFORMAL, DIFFEO)
DROP_TOLERANCE = 1e-8
TT_KEEP = 1e-6


@dataclass
class VariationBasis:
    """Orthonormal basis elements with labels and, for diffeo elements, their fields."""

    base: BackgroundData
    elements: list[TangentPair] = field(default_factory=list)
    labels: list[str] = field(default_factory=list)
    vectors: dict[int, NDArray] = field(default_factory=dict)

    def __len__(self) -> int:
        """Number of elements."""
        return len(self.elements)

    def indices(self, *labels: str) -> list[int]:
        """Positions of the elements carrying any of the labels."""
        return [i for i, label in enumerate(self.labels) if label in labels]

    def counts(self) -> dict[str, int]:
        """Number of elements per label."""
        return {label: self.labels.count(label) for label in LABELS}

    @cached_property
    def _stacks(self) -> tuple[NDArray, NDArray]:
        geo = self.base.geometry
        measure = self.base.measure
        h = np.stack([geo.raise_both(e.h) * measure[..., None, None] for e in self.elements])
        v = np.stack([e.v * measure for e in self.elements])
        return h, v

    def coordinates(self, x: TangentPair) -> NDArray:
        """Inner products with every element."""
        h, v = self._stacks
        return np.einsum("kxyab,xyab->k", h, x.h) + np.einsum("kxy,xy->k", v, x.v)

    def combine(self, coeffs: NDArray) -> TangentPair:
        """Sum of coefficient times element."""
        h = np.tensordot(coeffs, np.stack([e.h for e in self.elements]), axes=1)
        v = np.tensordot(coeffs, np.stack([e.v for e in self.elements]), axes=1)
        return TangentPair(h, v)

    def gram(self) -> NDArray:
        """Gram matrix in the fixed inner product."""
        return np.array([self.coordinates(e) for e in self.elements])

    def constraint_defect(self) -> float:
        """Largest inner product of a unit element with the unit constraint normal."""
        normal = self.base.constraint_normal
        return float(np.max(np.abs(self.coordinates(normal)))) / self.base.norm(normal)

    def tt_defect(self) -> float:
        """Largest trace or divergence defect among TT elements."""
        return max((tt_defect(self.base, self.elements[i].h) for i in self.indices(TT)), default=0.0)

    def gauge_defect(self) -> float:
        """Largest |e - (L_V gbar, 0)| over diffeo elements."""
        geo = self.base.geometry
        worst = 0.0
        for i, vector in self.vectors.items():
            e = self.elements[i]
            diff = TangentPair(e.h - geo.lie_derivative_metric(vector), e.v)
            worst = max(worst, self.base.norm(diff))
        return worst


def _orthonormalize(
    base: BackgroundData,
    candidates: list[TangentPair],
    against: list[TangentPair],
    vectors: list[NDArray] | None = None,
) -> tuple[list[TangentPair], list[NDArray]]:
    """Modified Gram-Schmidt of the candidates after projecting out an orthonormal set.

    A candidate is dropped when what remains of it is small against its own
    norm or against the largest candidate of the group, so Killing fields,
    whose L_V gbar is pure roundoff, never enter the basis.
    """
    kept: list[TangentPair] = []
    kept_vectors: list[NDArray] = []
    scale = max((base.norm(c) for c in candidates), default=0.0)
    for idx, candidate in enumerate(candidates):
        original = base.norm(candidate)
        if original <= DROP_TOLERANCE * scale:
            continue
        e = candidate
        vec = None if vectors is None else vectors[idx]
        for _ in range(2):
            for q in against:
                e = e - base.l2_inner(e, q) * q
            for j, q in enumerate(kept):
                c = base.l2_inner(e, q)
                e = e - c * q
                if vec is not None:
                    vec = vec - c * kept_vectors[j]
        norm = base.norm(e)
        if norm < DROP_TOLERANCE * original:
            continue
        kept.append(e / norm)
        if vec is not None:
            kept_vectors.append(vec / norm)
    return kept, kept_vectors


def _harmonics(base: BackgroundData, degree: int) -> list[NDArray]:
    grid = base.grid
    if isinstance(grid, SphereGrid):
        return [real_harmonic(grid, l, m) for l, m in harmonic_indices(degree)]
    return [
        torus_mode(grid, k1, k2, phase)
        for k1 in range(-degree, degree + 1)
        for k2 in range(degree + 1)
        if abs(k1) + k2 <= degree and (k2 > 0 or k1 >= 0)
        for phase in (0.0, 0.5 * np.pi)
        if not (k1 == 0 and k2 == 0 and phase > 0)
    ]


def _tt_candidates(base: BackgroundData, york_degree: int) -> list[TangentPair]:
    """TT parts of products of low-degree gradients, plus parallel trace-free tensors."""
    geo = base.geometry
    zero = np.zeros(base.grid.shape)
    grads, _ = gradient_forms(geo, 2)
    sources = [outer(grads[i], grads[j]) for i in range(len(grads)) for j in range(i, len(grads))]
    if not isinstance(base.grid, SphereGrid):
        for frame in (np.array([[1.0, 0.0], [0.0, -1.0]]), np.array([[0.0, 1.0], [1.0, 0.0]])):
            sources.append(geo.from_frame(np.broadcast_to(frame, (*base.grid.shape, 2, 2)).copy()))
    out = []
    for h in sources:
        try:
            split = york_decompose(h, base, york_degree)
        except DecompositionError:
            continue
        tt = split.tt
        if base.norm(TangentPair(tt, zero)) > TT_KEEP * base.norm(TangentPair(h, zero)):
            out.append(TangentPair(tt, zero))
    return out


def build_variation_basis(base: BackgroundData, degree: int = 4, york_degree: int = 10) -> VariationBasis:
    """Assemble the diffeo, conformal and TT groups up to the given harmonic degree."""
    geo = base.geometry
    zero = np.zeros(base.grid.shape)

    grads, rotated = gradient_forms(geo, degree)
    fields = grads + rotated
    diffeo_candidates = [TangentPair(geo.lie_derivative_metric(v), zero) for v in fields]
    diffeo, diffeo_vectors = _orthonormalize(base, diffeo_candidates, [], fields)

    normal = base.constraint_normal
    unit_normal = normal / base.norm(normal)
    conformal_candidates = []
    for y in _harmonics(base, degree):
        conformal_candidates.append(TangentPair(y[..., None, None] * base.gbar, zero))
        conformal_candidates.append(TangentPair(np.zeros_like(base.gbar), y))
    conformal, _ = _orthonormalize(base, conformal_candidates, [*diffeo, unit_normal])

    tt, _ = _orthonormalize(base, _tt_candidates(base, york_degree), [*diffeo, *conformal, unit_normal])

    basis = VariationBasis(base)
    for e, v in zip(diffeo, diffeo_vectors, strict=True):
        basis.vectors[len(basis.elements)] = v
        basis.elements.append(e)
        basis.labels.append(DIFFEO)
    for e in conformal:
        basis.elements.append(e)
        basis.labels.append(CONFORMAL)
    for e in tt:
        basis.elements.append(e)
        basis.labels.append(TT)
    logger.info(f"Variation basis up to degree {degree}: {basis.counts()}")
    return basis


def random_tangent(base: BackgroundData, rng: np.random.Generator, degree: int = 3, amplitude: float = 1.0) -> TangentPair:
    """Random smooth tangent vector at the base pair with unit-order components."""
    h = random_symmetric_tensor(base.geometry, rng, degree, amplitude)
    v = random_scalar(base.grid, rng, degree, amplitude=amplitude)
    x = TangentPair(h, v)
    normal = base.constraint_normal
    return x - (base.l2_inner(x, normal) / base.l2_inner(normal, normal)) * normal
