"""Effective uniqueness bootstrap: accepted instances and instances that must be refused."""

from conelab.decay import adversarial_instances, bootstrap_uniqueness, exact_cone_instance, forward_instance
from conelab.decay.bootstrap import STEPS
from conelab.models.base import BootstrapCertificate
from conelab.suites.base import SuiteContext

ADVERSARIAL_LENGTH = 1_000
ADVERSARIAL_SCALE = 7


def _accepted(ctx: SuiteContext, cert: BootstrapCertificate) -> None:
    ctx.certify(f"bootstrap-{cert.name}", cert)
    ctx.flag(
        f"accepted-{cert.name}",
        "monotone A and Q with the Theta relation, hypotheses (A) and (B) give uniqueness of the tangent cone",
        lambda: cert.accepted,
    )
    ctx.flag(
        f"steps-{cert.name}",
        "every step of the induction is verified in order",
        lambda: [step.step for step in cert.steps] == list(STEPS) and all(step.passed for step in cert.steps),
    )


def run(ctx: SuiteContext) -> None:
    """Forward and exact-cone instances must certify; each broken instance must fail at its own step and scale."""
    cfg = ctx.config.decay
    forward = bootstrap_uniqueness(forward_instance(cfg.horizon, delta=cfg.delta))
    _accepted(ctx, forward)
    ctx.check(
        "distance-bound",
        "3 sum Theta_j over the induction bounds the distance between rescaled annuli by delta",
        cfg.delta,
        lambda: forward.distance_bound,
    )
    _accepted(ctx, bootstrap_uniqueness(exact_cone_instance()))

    length = min(cfg.horizon, ADVERSARIAL_LENGTH)
    for name, (inst, step, scale) in adversarial_instances(length, ADVERSARIAL_SCALE).items():
        cert = bootstrap_uniqueness(inst)
        ctx.certify(f"bootstrap-{name}", cert)
        ctx.flag(
            f"refused-{name}",
            f"a violated hypothesis is reported at step {step}, scale {scale}",
            lambda cert=cert, step=step, scale=scale: (
                not cert.accepted and cert.failing_step == step and cert.failing_scale == scale
            ),
        )
