"""Weighted Einstein-Hilbert type functionals on pairs (g, w)."""

from conelab.functionals.background import BackgroundData
from conelab.functionals.energies import (
    eval_A,
    eval_A1,
    eval_B,
    eval_R,
    first_variation_A,
    first_variation_B,
    first_variation_R,
    in_A1,
)
from conelab.functionals.gradients import (
    dexp_chart,
    dexp_transpose,
    eval_G,
    exp_chart,
    grad_A1,
    grad_G,
    grad_R,
    neighborhood_guard,
    project_gradient,
    psi_map,
)
from conelab.functionals.pairs import TangentPair, WeightedPair

__all__ = [
    "BackgroundData",
    "TangentPair",
    "WeightedPair",
    "dexp_chart",
    "dexp_transpose",
    "eval_A",
    "eval_A1",
    "eval_B",
    "eval_G",
    "eval_R",
    "exp_chart",
    "first_variation_A",
    "first_variation_B",
    "first_variation_R",
    "grad_A1",
    "grad_G",
    "grad_R",
    "in_A1",
    "neighborhood_guard",
    "project_gradient",
    "psi_map",
]
