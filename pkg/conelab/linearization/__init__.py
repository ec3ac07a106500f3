"""Second variations, York splitting and the linearized operator at the base pair."""

from conelab.linearization.basis import CONFORMAL, DIFFEO, TT, VariationBasis, build_variation_basis, random_tangent
from conelab.linearization.operator import (
    KernelBasis,
    OperatorMatrix,
    assemble_L,
    conformal_image_tt_fraction,
    kernel_of_L,
    linearized_gradient,
)
from conelab.linearization.second_variation import (
    ConformalBlockOperator,
    conformal_block_operator,
    second_variation_A,
    second_variation_B,
    second_variation_R,
    sv_conformal,
    sv_transverse_traceless,
)
from conelab.linearization.york import YorkDecomposition, york_decompose

__all__ = [
    "CONFORMAL",
    "DIFFEO",
    "TT",
    "ConformalBlockOperator",
    "KernelBasis",
    "OperatorMatrix",
    "VariationBasis",
    "YorkDecomposition",
    "assemble_L",
    "build_variation_basis",
    "conformal_block_operator",
    "conformal_image_tt_fraction",
    "kernel_of_L",
    "linearized_gradient",
    "random_tangent",
    "second_variation_A",
    "second_variation_B",
    "second_variation_R",
    "sv_conformal",
    "sv_transverse_traceless",
    "york_decompose",
]
