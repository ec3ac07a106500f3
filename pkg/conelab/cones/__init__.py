"""Warped and cohomogeneity-one models carrying the Green coordinate b."""

from conelab.cones.eguchi_hanson import EguchiHansonModel, eguchi_hanson_model
from conelab.cones.green import GreenProfile, solve_green_radial
from conelab.cones.identities import IdentityReport, check_level_identities
from conelab.cones.levelset import (
    LevelSetData,
    eval_A_of_r,
    eval_Aprime,
    eval_Q_of_r,
    eval_R_levelset,
    level_data,
    trace_free_hessian,
)
from conelab.cones.properties import FamilyReport, c1_bound, check_property4, check_property5, sweep_family
from conelab.cones.warped import WarpedModel, cone, euclidean, preset, transition, warp_family

__all__ = [
    "EguchiHansonModel",
    "FamilyReport",
    "GreenProfile",
    "IdentityReport",
    "LevelSetData",
    "WarpedModel",
    "c1_bound",
    "check_level_identities",
    "check_property4",
    "check_property5",
    "cone",
    "eguchi_hanson_model",
    "euclidean",
    "eval_A_of_r",
    "eval_Aprime",
    "eval_Q_of_r",
    "eval_R_levelset",
    "level_data",
    "preset",
    "solve_green_radial",
    "sweep_family",
    "trace_free_hessian",
    "transition",
    "warp_family",
]
