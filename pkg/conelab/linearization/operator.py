"""Matrix of the linearized projected gradient on a variation basis."""

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.typing import NDArray

from conelab.errors import ConvergenceError
from conelab.functionals.background import BackgroundData
from conelab.functionals.gradients import exp_chart, project_gradient
from conelab.functionals.pairs import TangentPair
from conelab.linearization.basis import CONFORMAL, DIFFEO, TT, VariationBasis
from conelab.linearization.york import york_decompose
from conelab.utils.logger import logger
from conelab.variations.finite_difference import derivative


@dataclass
class OperatorMatrix:
    """Entries <L e_j, e_i> over an orthonormal basis, with the basis labels."""

    matrix: NDArray
    labels: list[str]

    @property
    def scale(self) -> float:
        """Spectral norm."""
        return float(np.linalg.norm(self.matrix, 2))

    def symmetry_defect(self) -> float:
        """|L - L^T| / |L|."""
        return float(np.linalg.norm(self.matrix - self.matrix.T, 2)) / max(self.scale, 1e-300)

    def block(self, rows: str, cols: str) -> NDArray:
        """Sub-matrix between two label groups."""
        r = [i for i, label in enumerate(self.labels) if label == rows]
        c = [j for j, label in enumerate(self.labels) if label == cols]
        return self.matrix[np.ix_(r, c)]

    def block_norm(self, rows: str, cols: str) -> float:
        """Spectral norm of a block relative to the whole matrix; 0 for empty blocks."""
        b = self.block(rows, cols)
        if b.size == 0:
            return 0.0
        return float(np.linalg.norm(b, 2)) / max(self.scale, 1e-300)

    def gauge_defect(self) -> float:
        """Largest diffeo row or column norm relative to |L|."""
        idx = [i for i, label in enumerate(self.labels) if label == DIFFEO]
        if not idx:
            return 0.0
        worst = max(
            float(np.max(np.linalg.norm(self.matrix[idx, :], axis=1))),
            float(np.max(np.linalg.norm(self.matrix[:, idx], axis=0))),
        )
        return worst / max(self.scale, 1e-300)

    def tt_offdiagonal(self) -> float:
        """TT against conformal and diffeo blocks, relative to |L|."""
        return max(self.block_norm(TT, CONFORMAL), self.block_norm(TT, DIFFEO), self.block_norm(CONFORMAL, TT))

    def export_csv(self, path: Path) -> None:
        """Row-major CSV with a header of basis labels."""
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow([f"{label}_{j}" for j, label in enumerate(self.labels)])
            for row in self.matrix:
                writer.writerow([repr(float(x)) for x in row])


def linearized_gradient(base: BackgroundData, direction: TangentPair, steps: tuple[float, ...]) -> TangentPair:
    """d/dt of the projected gradient along exp(t direction) at t = 0."""

    def h_path(t: float) -> np.ndarray:
        return project_gradient(exp_chart(t * direction, base), base).h

    def v_path(t: float) -> np.ndarray:
        return project_gradient(exp_chart(t * direction, base), base).v

    return TangentPair(derivative(h_path, steps), derivative(v_path, steps))


def _column(basis: VariationBasis, steps: tuple[float, ...], j: int) -> NDArray:
    base = basis.base
    e = basis.elements[j]

    def coords(t: float) -> NDArray:
        return basis.coordinates(project_gradient(exp_chart(t * e, base), base))

    column = derivative(coords, steps)
    logger.debug(f"operator column {j} ({basis.labels[j]}): norm {np.linalg.norm(column):.3e}")
    return np.asarray(column)


def assemble_L(
    basis: VariationBasis,
    steps: tuple[float, ...] = (1e-3, 1e-4),
    max_workers: int | None = None,
) -> OperatorMatrix:
    """Finite-difference columns of the linearized projected gradient."""
    logger.info(f"Assembling L on {len(basis)} basis elements")
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        columns = list(pool.map(lambda j: _column(basis, steps, j), range(len(basis))))
    matrix = np.column_stack(columns)
    if not np.all(np.isfinite(matrix)):
        msg = "assembled operator has non-finite entries"
        raise ConvergenceError(msg)
    return OperatorMatrix(matrix, list(basis.labels))


@dataclass
class KernelBasis:
    """Near-kernel of L restricted to the non-diffeo elements."""

    vectors: NDArray
    eigenvalues: NDArray
    spectrum: NDArray
    indices: list[int]

    @property
    def dim(self) -> int:
        """Kernel dimension."""
        return int(self.vectors.shape[1])


def kernel_of_L(m: OperatorMatrix, threshold: float = 1e-4) -> KernelBasis:
    """Eigenvectors with |lambda| below threshold times the spectral radius, embedded in full coordinates."""
    idx = [i for i, label in enumerate(m.labels) if label != DIFFEO]
    sub = m.matrix[np.ix_(idx, idx)]
    sub = 0.5 * (sub + sub.T)
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(sub)
    except np.linalg.LinAlgError as e:
        msg = f"eigensolver failed: {e}"
        raise ConvergenceError(msg) from e
    radius = float(np.max(np.abs(eigenvalues))) if eigenvalues.size else 0.0
    small = np.abs(eigenvalues) < threshold * radius if threshold > 0 else np.zeros(eigenvalues.shape, bool)
    vectors = np.zeros((len(m.labels), int(np.sum(small))))
    vectors[idx, :] = eigenvectors[:, small]
    logger.info(f"Kernel of L: dimension {vectors.shape[1]} (threshold {threshold:.1e} x {radius:.3e})")
    return KernelBasis(vectors, eigenvalues[small], eigenvalues, idx)


def conformal_image_tt_fraction(basis: VariationBasis, j: int, steps: tuple[float, ...], york_degree: int = 10) -> float:
    """|TT part| / |h| of the linearized gradient along a conformal element."""
    base = basis.base
    image = linearized_gradient(base, basis.elements[j], steps)
    split = york_decompose(image.h, base, york_degree)
    zero = np.zeros(base.grid.shape)
    size = base.norm(TangentPair(image.h, zero))
    if size == 0.0:
        return 0.0
    return base.norm(TangentPair(split.tt, zero)) / size
