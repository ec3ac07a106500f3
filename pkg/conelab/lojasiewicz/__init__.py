"""Reduction, exponent estimation and gradient flow for G = R o exp."""

from conelab.lojasiewicz.exponent import (
    estimate_exponent,
    inequality_violation,
    largest_feasible_alpha,
    sample_directions,
)
from conelab.lojasiewicz.flow import gradient_flow
from conelab.lojasiewicz.objectives import ChartObjective, DegenerateModel, Objective, QuadraticModel, QuarticModel
from conelab.lojasiewicz.reduction import ReducedProblem, build_reduction, lipschitz_ratio

__all__ = [
    "ChartObjective",
    "DegenerateModel",
    "Objective",
    "QuadraticModel",
    "QuarticModel",
    "ReducedProblem",
    "build_reduction",
    "estimate_exponent",
    "gradient_flow",
    "inequality_violation",
    "largest_feasible_alpha",
    "lipschitz_ratio",
    "sample_directions",
]
