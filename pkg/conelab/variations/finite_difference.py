"""Richardson-extrapolated central differences.

Every analytic variation in the package is checked against these. A path
is any callable t -> value where value is a float or an ndarray. Central
differences at decreasing steps s1 > s2 > ... are extrapolated to s = 0 as
polynomials in s^2, so k steps cancel the error terms up to s^(2k - 2).
"""

from collections.abc import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from conelab.errors import ConvergenceError
from conelab.utils.logger import logger

Value = float | NDArray
Path = Callable[[float], Value]


def central_first(f: Path, step: float) -> Value:
    """(f(s) - f(-s)) / 2s."""
    return (np.asarray(f(step)) - np.asarray(f(-step))) / (2.0 * step)


def central_second(f: Path, step: float, f0: Value | None = None) -> Value:
    """(f(s) - 2 f(0) + f(-s)) / s^2."""
    mid = np.asarray(f(0.0)) if f0 is None else np.asarray(f0)
    return (np.asarray(f(step)) - 2.0 * mid + np.asarray(f(-step))) / step**2


def _check_steps(steps: Sequence[float]) -> list[float]:
    out = [float(s) for s in steps]
    if len(out) < 2 or any(s <= 0.0 for s in out) or any(a <= b for a, b in zip(out, out[1:], strict=False)):
        msg = f"finite difference steps must be two or more strictly decreasing positive values, got {tuple(steps)}"
        raise ValueError(msg)
    return out


def _extrapolate(estimates: list[NDArray], steps: list[float]) -> NDArray:
    """Neville extrapolation to s = 0 of estimates with error series in s^2."""
    table = list(estimates)
    for j in range(1, len(steps)):
        table = [
            table[i + 1] + (table[i + 1] - table[i]) / ((steps[i] / steps[i + j]) ** 2 - 1.0)
            for i in range(len(table) - 1)
        ]
    return table[0]


def _finite(value: Value, what: str) -> Value:
    if not np.all(np.isfinite(value)):
        msg = f"{what} finite difference produced non-finite values"
        raise ConvergenceError(msg)
    if np.ndim(value) == 0:
        return float(value)
    return value


def derivative(f: Path, steps: Sequence[float]) -> Value:
    """First derivative at t = 0."""
    levels = _check_steps(steps)
    estimates = [np.asarray(central_first(f, s)) for s in levels]
    result = _extrapolate(estimates, levels)
    logger.debug(f"first difference steps={tuple(levels)} change={np.max(np.abs(estimates[-1] - estimates[-2])):.3e}")
    return _finite(result, "first")


def second_derivative(f: Path, steps: Sequence[float]) -> Value:
    """Second derivative at t = 0."""
    levels = _check_steps(steps)
    f0 = f(0.0)
    estimates = [np.asarray(central_second(f, s, f0)) for s in levels]
    result = _extrapolate(estimates, levels)
    logger.debug(f"second difference steps={tuple(levels)} change={np.max(np.abs(estimates[-1] - estimates[-2])):.3e}")
    return _finite(result, "second")


def relative_error(value: Value, reference: Value, floor: float = 1e-300, scale: float | None = None) -> float:
    """Sup-norm error relative to the reference, or to an explicit scale.

    An explicit scale is for references that vanish analytically and are
    assembled from larger terms that cancel. The error is absolute when the
    scale vanishes.
    """
    diff = float(np.max(np.abs(np.asarray(value) - np.asarray(reference))))
    if scale is None:
        scale = float(np.max(np.abs(np.asarray(reference))))
    if scale <= floor:
        return diff
    return diff / scale
