"""Unit tests for York splitting, the variation basis and the assembled operator."""

import csv
from pathlib import Path

import numpy as np
import pytest

from conelab.errors import DecompositionError
from conelab.functionals import BackgroundData, TangentPair
from conelab.geometry import TorusGrid
from conelab.geometry.harmonics import random_scalar, random_symmetric_tensor, real_harmonic
from conelab.linearization import (
    CONFORMAL,
    DIFFEO,
    TT,
    OperatorMatrix,
    VariationBasis,
    assemble_L,
    build_variation_basis,
    conformal_block_operator,
    kernel_of_L,
    second_variation_A,
    second_variation_R,
    sv_transverse_traceless,
    york_decompose,
)

BASIS_DEGREE = 2


@pytest.fixture(scope="module")
def basis(base: BackgroundData) -> VariationBasis:
    """Low-degree basis at the round base."""
    return build_variation_basis(base, BASIS_DEGREE)


@pytest.fixture(scope="module")
def operator(basis: VariationBasis) -> OperatorMatrix:
    """Linearized operator on the low-degree basis."""
    return assemble_L(basis)


def test_york_random_tensor(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test reconstruction, orthogonality and the TT conditions."""
    split = york_decompose(random_symmetric_tensor(base.geometry, rng, 3), base)
    assert split.reconstruction_residual() < 1e-8
    assert split.lie_residual() < 1e-8
    assert split.orthogonality() < 1e-8
    assert split.divergence_defect() < 1e-6
    assert split.trace_defect() < 1e-8


def test_york_pure_trace(base: BackgroundData) -> None:
    """Test that phi gbar is its own trace part."""
    phi = real_harmonic(base.grid, 2, 0)
    split = york_decompose(phi[..., None, None] * base.gbar, base)
    assert np.allclose(split.trace_factor, phi, atol=1e-12)
    assert np.max(np.abs(split.gauge)) < 1e-10


def test_york_degree_too_low(base: BackgroundData) -> None:
    """Test that a fit without enough vector fields is refused."""
    geo = base.geometry
    h = geo.lie_derivative_metric(geo.gradient(real_harmonic(base.grid, 6, 3)))
    with pytest.raises(DecompositionError, match="York degree"):
        york_decompose(h, base, degree=2)


def test_basis_is_orthonormal(basis: VariationBasis) -> None:
    """Test the Gram matrix and the tangency of every element."""
    assert np.max(np.abs(basis.gram() - np.eye(len(basis)))) < 1e-10
    assert basis.constraint_defect() < 1e-10


def test_basis_groups(basis: VariationBasis) -> None:
    """Test the group order and that the sphere has no TT elements."""
    counts = basis.counts()
    assert counts[DIFFEO] > 0
    assert counts[CONFORMAL] > 0
    assert counts.get(TT, 0) == 0
    assert basis.labels == sorted(basis.labels, key=[DIFFEO, CONFORMAL, TT].index)


def test_basis_group_dimensions(basis: VariationBasis) -> None:
    """Test that Killing and conformal Killing directions never enter the basis.

    Up to degree L the sphere has 2 * sum (2l + 1) gradient and rotated
    gradient fields, three of them Killing. The conformal group loses the
    three l = 1 directions already spanned by Hessians and the constraint
    normal.
    """
    gradients = 2 * sum(2 * l + 1 for l in range(1, BASIS_DEGREE + 1))
    counts = basis.counts()
    assert counts[DIFFEO] == gradients - 3
    assert counts[CONFORMAL] == 2 * (BASIS_DEGREE + 1) ** 2 - 3 - 1


def test_basis_vector_fields_bounded(basis: VariationBasis) -> None:
    """Test that tracked vector fields stay of unit order."""
    geo = basis.base.geometry
    largest = max(float(np.sqrt(np.max(geo.inner_forms(v, v)))) for v in basis.vectors.values())
    assert largest < 1e2


def test_basis_tracks_vector_fields(basis: VariationBasis) -> None:
    """Test that diffeo elements are Lie derivatives of their tracked fields."""
    assert basis.gauge_defect() < 1e-8


def test_basis_coordinates(basis: VariationBasis) -> None:
    """Test that coordinates invert combine."""
    coeffs = np.linspace(-1.0, 1.0, len(basis))
    assert np.allclose(basis.coordinates(basis.combine(coeffs)), coeffs, atol=1e-10)


def test_operator_structure(operator: OperatorMatrix) -> None:
    """Test symmetry, gauge invariance and the TT blocks."""
    assert operator.symmetry_defect() < 1e-6
    assert operator.gauge_defect() < 1e-6
    assert operator.tt_offdiagonal() == 0.0


def test_kernel_excludes_diffeo(operator: OperatorMatrix) -> None:
    """Test that kernel vectors have no diffeo coordinates."""
    kernel = kernel_of_L(operator)
    diffeo = [i for i, label in enumerate(operator.labels) if label == DIFFEO]
    assert np.all(kernel.vectors[diffeo, :] == 0.0)
    assert len(kernel.spectrum) == len(operator.labels) - len(diffeo)


def test_synthetic_kernel() -> None:
    """Test kernel recovery on diag(0, 0, 1, 2)."""
    m = OperatorMatrix(np.diag([0.0, 0.0, 1.0, 2.0]), [CONFORMAL] * 4)
    assert kernel_of_L(m, 1e-4).dim == 2
    assert kernel_of_L(m, 0.0).dim == 0


def test_synthetic_kernel_skips_diffeo() -> None:
    """Test that diffeo labels never enter the kernel."""
    m = OperatorMatrix(np.diag([0.0, 0.0, 3.0]), [DIFFEO, CONFORMAL, CONFORMAL])
    kernel = kernel_of_L(m)
    assert kernel.dim == 1
    assert kernel.vectors[0, 0] == 0.0
    assert kernel.indices == [1, 2]


def test_block_norms() -> None:
    """Test block extraction and empty blocks."""
    m = OperatorMatrix(np.array([[2.0, 1.0], [1.0, 2.0]]), [CONFORMAL, TT])
    assert m.symmetry_defect() == 0.0
    assert m.block(CONFORMAL, TT).tolist() == [[1.0]]
    assert m.block_norm(CONFORMAL, TT) == pytest.approx(1.0 / 3.0)
    assert m.block_norm(DIFFEO, TT) == 0.0
    assert m.tt_offdiagonal() == pytest.approx(1.0 / 3.0)


def test_export_csv(tmp_path: Path) -> None:
    """Test the CSV layout of an operator matrix."""
    m = OperatorMatrix(np.array([[1.0, 0.5], [0.5, 2.0]]), [DIFFEO, CONFORMAL])
    path = tmp_path / "op.csv"
    m.export_csv(path)
    with path.open() as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["diffeo_0", "conformal_1"]
    assert [float(x) for x in rows[2]] == [0.5, 2.0]


def test_second_variation_zero(base: BackgroundData) -> None:
    """Test R'' = 0 along the constant path."""
    zero = TangentPair.zeros(base.grid)
    assert abs(second_variation_R(base, zero, zero)) < 1e-12


def test_weight_only_tt_form(base: BackgroundData) -> None:
    """Test (2 - n) R'' = 6 b^3 integral of v^2 for (0, v) with v of mean zero."""
    v = real_harmonic(base.grid, 2, 1)
    assert sv_transverse_traceless(base, np.zeros_like(base.gbar), v) == pytest.approx(-6.0, rel=1e-10)


def test_scaling_path(base: BackgroundData) -> None:
    """Test A'' along h = c gbar, v = -c."""
    c = 0.1
    x = TangentPair(c * base.gbar, np.full(base.grid.shape, -c))
    expected = 4.0 * np.pi * (9.0 * c**2 - 6.0 * c**2)
    assert second_variation_A(base, x, TangentPair.zeros(base.grid)) == pytest.approx(expected, rel=1e-10)


def test_conformal_symbol(base: BackgroundData) -> None:
    """Test that the conformal block symbol has determinant -1."""
    assert conformal_block_operator(base).symbol_determinant == pytest.approx(-1.0, abs=1e-15)


def test_conformal_block_symmetric(base: BackgroundData, rng: np.random.Generator) -> None:
    """Test symmetry of the conformal block on random fields, relative to the Cauchy-Schwarz bound."""
    block = conformal_block_operator(base)
    phi1, v1, phi2, v2 = (random_scalar(base.grid, rng, 4) for _ in range(4))
    left = block.apply(phi1, v1)
    right = block.apply(phi2, v2)
    lhs = base.integrate(left[0] * phi2 + left[1] * v2)
    rhs = base.integrate(phi1 * right[0] + v1 * right[1])
    bound = np.sqrt(base.integrate(left[0] ** 2 + left[1] ** 2) * base.integrate(phi2**2 + v2**2))
    assert abs(lhs) > 1e-4 * bound
    assert abs(lhs - rhs) < 1e-10 * bound


def test_torus_lichnerowicz(torus: TorusGrid, rng: np.random.Generator) -> None:
    """Test that the Lichnerowicz Laplacian is the rough Laplacian on a flat torus."""
    geo = BackgroundData.flat_torus(torus).geometry
    h = random_symmetric_tensor(geo, rng, 3)
    assert np.max(np.abs(geo.lichnerowicz(h) - geo.rough_laplacian(h))) < 1e-10
