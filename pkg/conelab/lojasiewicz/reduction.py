"""Lyapunov-Schmidt reduction N = grad G + Pi_K and its inverse Phi."""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import NDArray

from conelab.errors import ConvergenceError
from conelab.lojasiewicz.objectives import Objective
from conelab.utils.logger import logger
from conelab.variations.finite_difference import derivative


@dataclass
class ReducedProblem:
    """Reduction of an objective onto the kernel of its linearization.

    `kernel` has orthonormal columns spanning K in coordinate space. Phi is
    solved by Newton iteration on N(x) = y started at y, using the exact
    Hessian when the objective provides one and the frozen d N_0 otherwise.
    """

    objective: Objective
    kernel: NDArray
    newton_tol: float = 1e-12
    newton_max_iter: int = 50
    fd_steps: tuple[float, ...] = (1e-3, 1e-4)
    base_value: float = field(init=False)

    def __post_init__(self) -> None:
        """Record G(0)."""
        self.base_value = self.objective.value(np.zeros(self.objective.dim))

    @property
    def kernel_dim(self) -> int:
        """Dimension of K."""
        return int(self.kernel.shape[1])

    @cached_property
    def projector(self) -> NDArray:
        """Pi_K."""
        return self.kernel @ self.kernel.T

    @cached_property
    def dN0(self) -> NDArray:
        """L + Pi_K."""
        return self.objective.linearization() + self.projector

    @cached_property
    def dN0_inverse(self) -> NDArray:
        """Inverse of d N_0."""
        return np.linalg.inv(self.dN0)

    def invertibility(self) -> float:
        """Smallest |eigenvalue| of d N_0 over the largest."""
        eig = np.abs(np.linalg.eigvalsh(0.5 * (self.dN0 + self.dN0.T)))
        return float(eig.min() / eig.max())

    def N(self, x: NDArray) -> NDArray:
        """grad G(x) + Pi_K x."""
        return self.objective.gradient(x) + self.projector @ x

    def _jacobian_inverse(self, x: NDArray) -> NDArray:
        hessian = getattr(self.objective, "hessian", None)
        if hessian is None:
            return self.dN0_inverse
        return np.linalg.inv(hessian(x) + self.projector)

    def phi(self, y: NDArray) -> NDArray:
        """Solve N(x) = y."""
        x = np.array(y, dtype=float)
        target = max(1.0, float(np.linalg.norm(y)))
        for iteration in range(self.newton_max_iter):
            residual = self.N(x) - y
            size = float(np.linalg.norm(residual))
            logger.debug(f"Newton iteration {iteration}: residual {size:.3e}")
            if size <= self.newton_tol * target:
                return x
            x = x - self._jacobian_inverse(x) @ residual
            if not np.all(np.isfinite(x)):
                break
        residual = float(np.linalg.norm(self.N(x) - y))
        if np.isfinite(residual) and residual <= 1e3 * self.newton_tol * target:
            logger.debug(f"Newton stalled at residual {residual:.3e}, accepted")
            return x
        msg = f"Newton iteration for Phi did not converge (residual {residual:.3e})"
        raise ConvergenceError(msg)

    def f(self, z: NDArray) -> float:
        """Reduced function G(Phi(K z)) on kernel coordinates."""
        return self.objective.value(self.phi(self.kernel @ z))

    def grad_f(self, z: NDArray) -> NDArray:
        """Gradient of f by central differences."""
        out = np.zeros(self.kernel_dim)
        for i in range(self.kernel_dim):
            e = np.zeros(self.kernel_dim)
            e[i] = 1.0
            out[i] = derivative(lambda t, e=e: self.f(z + t * e), self.fd_steps)
        return out

    def identity_defects(self, y: NDArray) -> tuple[float, float]:
        """Relative |N(Phi(y)) - y| and |Phi(N(y)) - y|."""
        scale = max(float(np.linalg.norm(y)), 1e-300)
        forward = float(np.linalg.norm(self.N(self.phi(y)) - y)) / scale
        backward = float(np.linalg.norm(self.phi(self.N(y)) - y)) / scale
        return forward, backward


def build_reduction(
    objective: Objective,
    kernel: NDArray,
    newton_tol: float = 1e-12,
    newton_max_iter: int = 50,
    fd_steps: tuple[float, ...] = (1e-3, 1e-4),
) -> ReducedProblem:
    """Reduction with an invertibility certificate for d N_0."""
    problem = ReducedProblem(objective, kernel, newton_tol, newton_max_iter, fd_steps)
    certificate = problem.invertibility()
    if not certificate > 1e-12:
        msg = f"L + Pi_K is numerically singular (eigenvalue ratio {certificate:.3e})"
        raise ConvergenceError(msg)
    logger.info(f"Reduction with kernel dimension {problem.kernel_dim}, invertibility {certificate:.3e}")
    return problem


def lipschitz_ratio(problem: ReducedProblem, samples: NDArray) -> float:
    """Largest |Phi(x) - Phi(y)| / |x - y| over consecutive sample pairs."""
    images = [problem.phi(s) for s in samples]
    worst = 0.0
    for a, b, ia, ib in zip(samples[:-1], samples[1:], images[:-1], images[1:], strict=True):
        gap = float(np.linalg.norm(a - b))
        if gap > 0:
            worst = max(worst, float(np.linalg.norm(ia - ib)) / gap)
    return worst
