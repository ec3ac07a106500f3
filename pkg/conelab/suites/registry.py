"""Ordered registry of the experiment suites and the single-suite runner."""

import math

import numpy as np

from conelab.errors import ConfigError
from conelab.models.base import ResultRecord, SuiteResult
from conelab.suites import (
    bootstrap,
    cone_models,
    decay_engine,
    geometry_oracles,
    level_identities,
    linearization_structure,
    lojasiewicz,
    second_variation,
    variation_oracles,
)
from conelab.suites.base import Suite, SuiteContext
from conelab.utils.config import ConeLabConfig
from conelab.utils.logger import logger

ALL = "all"

SUITES: tuple[Suite, ...] = (
    Suite("geometry-oracles", "Curvature, spectral and quadrature oracles on the sphere and torus", geometry_oracles.run),
    Suite("variation-oracles", "First variations, base values, gradients and the exponential chart", variation_oracles.run),
    Suite("second-variation", "Second variations of A, B and R and their TT and conformal forms", second_variation.run),
    Suite(
        "linearization-structure",
        "York splitting, variation basis and the assembled linearized operator",
        linearization_structure.run,
    ),
    Suite("lojasiewicz", "Reduction, empirical exponents and gradient flows", lojasiewicz.run),
    Suite("cone-models", "Green coordinate, A, Q and level-set properties on model cones", cone_models.run),
    Suite("level-identities", "Identities for B_b and the level sets of b", level_identities.run),
    Suite("decay-engine", "Algebraic lemma, decay iteration, series and Theta sums", decay_engine.run),
    Suite("bootstrap", "Uniqueness bootstrap on forward, exact and broken instances", bootstrap.run),
)


def list_suites() -> list[str]:
    """Suite names in run order."""
    return [s.name for s in SUITES]


def resolve(selection: str) -> list[Suite]:
    """Suites selected by a comma-separated list of names, or all of them, in run order."""
    names = {part.strip() for part in selection.split(",") if part.strip()}
    if ALL in names:
        return list(SUITES)
    unknown = sorted(names - set(list_suites()))
    if unknown or not names:
        msg = f"unknown suite '{selection}'; choose one of {', '.join([*list_suites(), ALL])}"
        raise ConfigError(msg)
    return [suite for suite in SUITES if suite.name in names]


def run_suite(suite: Suite, config: ConeLabConfig) -> SuiteResult:
    """Run one suite with its own seeded random stream.

    An exception escaping the suite is kept as a failing record so the
    checks recorded before it survive.
    """
    index = list_suites().index(suite.name)
    ctx = SuiteContext(suite.name, config, np.random.default_rng([config.seed, index]))
    logger.info(f"Running suite {suite.name}")
    try:
        suite.run(ctx)
    except Exception as e:  # noqa: BLE001
        logger.error(f"Suite {suite.name} aborted: {type(e).__name__}: {e}")
        ctx.result.records.append(
            ResultRecord(suite=suite.name, check="suite-completed", anchor=suite.description, value=math.inf, tol=0.0)
        )
    logger.info(f"Suite {suite.name}: {len(ctx.result.records)} records, {ctx.result.failures} failures")
    return ctx.result
