"""Objectives on coordinate space: synthetic models and G = R o exp on the basis."""

from dataclasses import dataclass, field
from typing import Protocol, runtime_checkable

import numpy as np
from numpy.typing import NDArray

from conelab.errors import ConstraintError
from conelab.functionals.background import BackgroundData
from conelab.functionals.gradients import eval_G, grad_G
from conelab.functionals.pairs import TangentPair
from conelab.linearization.basis import DIFFEO, VariationBasis
from conelab.linearization.operator import KernelBasis, OperatorMatrix


@runtime_checkable
class Objective(Protocol):
    """A smooth function on R^dim with a critical point at the origin."""

    dim: int

    def value(self, x: NDArray) -> float:
        """Function value."""
        ...

    def gradient(self, x: NDArray) -> NDArray:
        """Gradient."""
        ...

    def linearization(self) -> NDArray:
        """Hessian at the origin."""
        ...


@dataclass
class QuadraticModel:
    """G(x) = |x|^2."""

    dim: int

    def value(self, x: NDArray) -> float:
        """|x|^2."""
        return float(x @ x)

    def gradient(self, x: NDArray) -> NDArray:
        """2 x."""
        return 2.0 * x

    def hessian(self, x: NDArray) -> NDArray:
        """2 I."""
        return 2.0 * np.eye(self.dim)

    def linearization(self) -> NDArray:
        """2 I."""
        return self.hessian(np.zeros(self.dim))


@dataclass
class QuarticModel:
    """G(x) = |x|^4, degenerate in every direction."""

    dim: int

    def value(self, x: NDArray) -> float:
        """|x|^4."""
        return float((x @ x) ** 2)

    def gradient(self, x: NDArray) -> NDArray:
        """4 |x|^2 x."""
        return 4.0 * (x @ x) * x

    def hessian(self, x: NDArray) -> NDArray:
        """4 |x|^2 I + 8 x x^T."""
        return 4.0 * (x @ x) * np.eye(self.dim) + 8.0 * np.outer(x, x)

    def linearization(self) -> NDArray:
        """Zero."""
        return np.zeros((self.dim, self.dim))


@dataclass
class DegenerateModel:
    """G(x) = |x_K|^4 + |x_perp|^2 with K the first `kernel_dim` coordinates."""

    dim: int
    kernel_dim: int

    def _split(self, x: NDArray) -> tuple[NDArray, NDArray]:
        return x[: self.kernel_dim], x[self.kernel_dim :]

    def value(self, x: NDArray) -> float:
        """Quartic on K, quadratic off K."""
        xk, xp = self._split(x)
        return float((xk @ xk) ** 2 + xp @ xp)

    def gradient(self, x: NDArray) -> NDArray:
        """(4 |x_K|^2 x_K, 2 x_perp)."""
        xk, xp = self._split(x)
        return np.concatenate([4.0 * (xk @ xk) * xk, 2.0 * xp])

    def hessian(self, x: NDArray) -> NDArray:
        """Block diagonal Hessian."""
        xk, _ = self._split(x)
        out = np.zeros((self.dim, self.dim))
        k = self.kernel_dim
        out[:k, :k] = 4.0 * (xk @ xk) * np.eye(k) + 8.0 * np.outer(xk, xk)
        out[k:, k:] = 2.0 * np.eye(self.dim - k)
        return out

    def linearization(self) -> NDArray:
        """diag(0, ..., 0, 2, ..., 2)."""
        return self.hessian(np.zeros(self.dim))

    def kernel(self) -> NDArray:
        """Orthonormal basis of the true kernel."""
        return np.eye(self.dim)[:, : self.kernel_dim]


@dataclass
class ChartObjective:
    """G = R o exp in coordinates over the non-diffeo basis elements."""

    base: BackgroundData
    basis: VariationBasis
    operator: OperatorMatrix
    indices: list[int] = field(init=False)

    def __post_init__(self) -> None:
        """Select the coordinates that exclude gauge directions."""
        self.indices = [i for i, label in enumerate(self.basis.labels) if label != DIFFEO]

    @property
    def dim(self) -> int:
        """Number of coordinates."""
        return len(self.indices)

    def embed(self, x: NDArray) -> TangentPair:
        """Tangent vector with coordinates x."""
        coeffs = np.zeros(len(self.basis))
        coeffs[self.indices] = x
        return self.basis.combine(coeffs)

    def value(self, x: NDArray) -> float:
        """G(x)."""
        return eval_G(self.embed(x), self.base)

    def gradient(self, x: NDArray) -> NDArray:
        """Coordinates of grad G(x)."""
        return self.basis.coordinates(grad_G(self.embed(x), self.base))[self.indices]

    def linearization(self) -> NDArray:
        """Block of the assembled operator on the coordinates."""
        sub = self.operator.matrix[np.ix_(self.indices, self.indices)]
        return 0.5 * (sub + sub.T)

    def restrict(self, kernel: KernelBasis) -> NDArray:
        """Kernel vectors in the coordinates of this objective."""
        return kernel.vectors[self.indices, :]

    def directional(self, x: NDArray, y: TangentPair, tol: float = 1e-8) -> float:
        """<grad G(x), y> for y in the span of the coordinates; gauge directions are refused."""
        coords = self.basis.coordinates(y)
        gauge = [i for i in range(len(self.basis)) if i not in self.indices]
        if gauge and np.max(np.abs(coords[gauge])) > tol * max(1.0, float(np.max(np.abs(coords)))):
            msg = "direction has a gauge component outside the coordinate space"
            raise ConstraintError(msg)
        return float(self.gradient(x) @ coords[self.indices])
