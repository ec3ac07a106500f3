"""Sequence machinery: decay iteration, Theta summability and the uniqueness bootstrap."""

from conelab.decay.bootstrap import adversarial_instances, bootstrap_uniqueness, exact_cone_instance, forward_instance
from conelab.decay.lemmas import alg_constant, alg_lemma, iterate_decay, o3_step, series_lemma, verify_alg_lemma
from conelab.decay.sequences import extremal_sequence, power_sequence, to_base2, to_base4
from conelab.decay.theta import (
    annulus_chain,
    cauchy_annuli,
    feasible_split,
    sum_theta,
    synthetic_annuli,
    theta_from_Q,
)

__all__ = [
    "adversarial_instances",
    "alg_constant",
    "alg_lemma",
    "annulus_chain",
    "bootstrap_uniqueness",
    "cauchy_annuli",
    "exact_cone_instance",
    "extremal_sequence",
    "feasible_split",
    "forward_instance",
    "iterate_decay",
    "o3_step",
    "power_sequence",
    "series_lemma",
    "sum_theta",
    "synthetic_annuli",
    "theta_from_Q",
    "to_base2",
    "to_base4",
    "verify_alg_lemma",
]
