"""Empirical Lojasiewicz exponent by log-slope feasibility.

Samples x = r d lie on a fixed set of unit directions d and geometric radii
r. Along each direction the slopes s_G and s_grad of log |G(x) - G(0)| and
log |grad G(x)|^2 against log r are fitted. An exponent alpha is feasible
when (2 - alpha) s_G - s_grad >= -slope_tol on every direction, i.e. when
|G - G(0)|^(2 - alpha) / |grad G|^2 stays bounded as r shrinks. The largest
feasible alpha in (0, 1) is found by bisection and the ratio's maximum over
the samples is reported as the constant.
"""

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from conelab.errors import ConvergenceError, PreconditionError
from conelab.lojasiewicz.reduction import ReducedProblem
from conelab.models.base import ExponentEstimate
from conelab.utils.logger import logger

RADII_PER_DIRECTION = 10
RADIUS_SPAN = 100.0
BISECTION_STEPS = 50


@dataclass
class _Sample:
    direction: int
    radius: float
    x: NDArray
    drop: float
    grad2: float


def _directions(dim: int, count: int, rng: np.random.Generator) -> NDArray:
    d = rng.standard_normal((count, dim))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def sample_directions(dim: int, samples: int, seed: int | None) -> NDArray:
    """Unit directions used by `estimate_exponent` for a given sample count and seed."""
    return _directions(dim, max(1, samples // RADII_PER_DIRECTION), np.random.default_rng(seed))


def _slopes(samples: list[_Sample]) -> list[tuple[float, float]]:
    """(s_G, s_grad) per direction with at least two usable radii."""
    out = []
    for k in sorted({s.direction for s in samples}):
        own = [s for s in samples if s.direction == k]
        if len(own) < 2:
            continue
        log_r = np.log([s.radius for s in own])
        s_g = float(np.polyfit(log_r, np.log([s.drop for s in own]), 1)[0])
        s_grad = float(np.polyfit(log_r, np.log([s.grad2 for s in own]), 1)[0])
        out.append((s_g, s_grad))
    return out


def _feasible(alpha: float, slopes: list[tuple[float, float]], slope_tol: float) -> bool:
    return all((2.0 - alpha) * s_g - s_grad >= -slope_tol for s_g, s_grad in slopes)


def largest_feasible_alpha(slopes: list[tuple[float, float]], slope_tol: float) -> float:
    """Bisection for the largest alpha in (0, 1) passing the slope test; 0 when none does."""
    lo, hi = 0.0, 1.0
    if not _feasible(1e-12, slopes, slope_tol):
        return 0.0
    if _feasible(1.0, slopes, slope_tol):
        return 1.0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if _feasible(mid, slopes, slope_tol):
            lo = mid
        else:
            hi = mid
    return lo


def _collect(problem: ReducedProblem, radius: float, directions: NDArray) -> list[_Sample]:
    objective = problem.objective
    g0 = problem.base_value
    radii = np.geomspace(radius / RADIUS_SPAN, radius, RADII_PER_DIRECTION)
    samples = []
    for k, d in enumerate(directions):
        for r in radii:
            x = r * d
            drop = abs(objective.value(x) - g0)
            grad = objective.gradient(x)
            grad2 = float(grad @ grad)
            if drop > 0.0 and grad2 > 0.0 and np.isfinite(drop) and np.isfinite(grad2):
                samples.append(_Sample(k, float(r), x, drop, grad2))
    return samples


def estimate_exponent(
    problem: ReducedProblem,
    radius: float,
    samples: int,
    seed: int | None = None,
    slope_tol: float = 1e-2,
    lemma_samples: int | None = None,
) -> ExponentEstimate:
    """Largest alpha with |G(x) - G(0)|^(2 - alpha) <= C |grad G(x)|^2 over the samples.

    The reduction inequalities for grad f and f are evaluated on the first
    `lemma_samples` samples (all when None). A radius whose Newton solves
    fail is halved and the sampling restarted.
    """
    if samples < 1:
        msg = "exponent estimation needs at least one sample"
        raise PreconditionError(msg)
    directions = sample_directions(problem.objective.dim, samples, seed)

    current = radius
    for _ in range(8):
        try:
            return _estimate(problem, current, directions, seed, slope_tol, lemma_samples)
        except ConvergenceError as e:
            logger.warning(f"Exponent estimation at radius {current:.3e} failed ({e}); halving")
            current *= 0.5
    msg = f"exponent estimation failed down to radius {current:.3e}"
    raise ConvergenceError(msg)


def _estimate(
    problem: ReducedProblem,
    radius: float,
    directions: NDArray,
    seed: int | None,
    slope_tol: float,
    lemma_samples: int | None,
) -> ExponentEstimate:
    collected = _collect(problem, radius, directions)
    if not collected:
        msg = "no sample has a nonzero drop and gradient"
        raise PreconditionError(msg)
    slopes = _slopes(collected)
    alpha = largest_feasible_alpha(slopes, slope_tol) if slopes else 0.0
    valid = bool(slopes) and alpha > 0.0
    exponent = 2.0 - alpha
    ratios = [s.drop**exponent / s.grad2 for s in collected]
    outer = [s.drop**exponent / s.grad2 for s in collected if np.isclose(s.radius, radius)]

    grad_c = f_c = chain_c = 0.0
    kernel = problem.kernel
    g0 = problem.base_value
    for s in collected[: lemma_samples if lemma_samples is not None else len(collected)]:
        z = kernel.T @ s.x
        f_val = problem.f(z)
        if problem.kernel_dim:
            gf = problem.grad_f(z)
            grad_c = max(grad_c, float(gf @ gf) / s.grad2)
        f_c = max(f_c, abs(problem.objective.value(s.x) - f_val) / s.grad2)
        chain_c = max(chain_c, abs(f_val - g0) ** exponent / s.grad2)

    estimate = ExponentEstimate(
        alpha_hat=alpha,
        samples=len(collected),
        constant=max(ratios),
        worst_ratio=max(outer, default=max(ratios)),
        valid=valid,
        radii=np.geomspace(radius / RADIUS_SPAN, radius, RADII_PER_DIRECTION).tolist(),
        seed=seed,
        grad_constant=grad_c,
        f_constant=f_c,
        chain_constant=chain_c,
    )
    logger.info(f"Exponent estimate: alpha = {alpha:.4f}, C = {estimate.constant:.3e} on {len(collected)} samples")
    return estimate


def inequality_violation(problem: ReducedProblem, estimate: ExponentEstimate, x: NDArray) -> float:
    """|G(x) - G(0)|^(2 - alpha) - C |grad G(x)|^2; nonpositive when the fitted inequality holds at x."""
    drop = abs(problem.objective.value(x) - problem.base_value)
    grad = problem.objective.gradient(x)
    return drop ** (2.0 - estimate.alpha_hat) - estimate.constant * float(grad @ grad)
