"""Explicit gradient descent with a safeguarded step."""

import numpy as np
from numpy.typing import NDArray

from conelab.errors import GuardError
from conelab.lojasiewicz.objectives import Objective
from conelab.models.base import FlowReport
from conelab.utils.logger import logger

MAX_HALVINGS = 40


def gradient_flow(objective: Objective, x0: NDArray, step: float, iters: int) -> FlowReport:
    """Iterate x <- x - step grad G(x), halving the step whenever G would increase."""
    x = np.array(x0, dtype=float)
    value = objective.value(x)
    iterates = [x.copy()]
    values = [value]
    norms: list[float] = []
    halvings = 0
    stopped = ""

    for k in range(iters):
        grad = objective.gradient(x)
        norms.append(float(np.linalg.norm(grad)))
        if norms[-1] == 0.0:
            stopped = "stationary"
            break
        while True:
            trial = x - step * grad
            try:
                trial_value = objective.value(trial)
            except GuardError as e:
                logger.warning(f"Flow step {k} left the chart ({e}); halving step")
                trial_value = np.inf
            if trial_value <= value:
                break
            step *= 0.5
            halvings += 1
            if halvings > MAX_HALVINGS:
                stopped = "step underflow"
                break
            logger.warning(f"Flow step {k}: G increased, step halved to {step:.3e}")
        if stopped:
            break
        x, value = trial, trial_value
        iterates.append(x.copy())
        values.append(value)
        logger.debug(f"Flow step {k}: G = {value:.15e}, |grad G| = {norms[-1]:.3e}")

    final = iterates[-1]
    distances = [float(np.linalg.norm(p - final)) for p in iterates]
    logger.info(f"Gradient flow: {len(values) - 1} steps, {halvings} halvings, final G = {values[-1]:.12e}")
    return FlowReport(
        values=values,
        distances=distances,
        gradient_norms=norms,
        step=step,
        halvings=halvings,
        stopped=stopped,
    )
