"""Variation formulas of geometric quantities and their finite-difference oracles."""

from conelab.variations.constraint import (
    ConstraintResiduals,
    constraint_derivatives,
    constraint_residuals,
    second_order_completion,
)
from conelab.variations.finite_difference import derivative, relative_error, second_derivative
from conelab.variations.topping import (
    dhessian,
    dmetric_inverse,
    dnorm_gradient,
    dricci,
    dscalar_curvature,
    dvolume_form,
    lie_derivative_oracle,
)

__all__ = [
    "ConstraintResiduals",
    "constraint_derivatives",
    "constraint_residuals",
    "derivative",
    "dhessian",
    "dmetric_inverse",
    "dnorm_gradient",
    "dricci",
    "dscalar_curvature",
    "dvolume_form",
    "lie_derivative_oracle",
    "relative_error",
    "second_derivative",
    "second_order_completion",
]
