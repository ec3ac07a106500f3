"""Bootstrap of effective uniqueness on abstract scale data.

Every hypothesis is checked on the instance, never assumed. The induction
carries a closeness budget delta_k: it starts at the worst seed closeness
and grows by 3 Theta_k per scale, and each step verifies both that
delta_(k+1) + 3 delta / 100 < delta and that the closeness oracle at scale
k + 1 respects delta_(k+1). The effective bound is the Theta tail estimate
C_bar j^(-beta_bar), checked against the direct tails.
"""

import numpy as np

from conelab.decay.sequences import constant_sequence, extremal_sequence, fitted_decay_constant, to_base2
from conelab.decay.theta import cauchy_annuli, relation_violations, sum_theta, tail_sums, theta_from_Q
from conelab.errors import PreconditionError
from conelab.models.base import BootstrapCertificate, BootstrapInstance, StepRecord
from conelab.utils.logger import logger

STEPS = ("monotonicity", "theta_relation", "hypothesis_A", "hypothesis_B", "seed_budget", "induction", "effective_bound")


class _Refused(Exception):
    def __init__(self, step: str, scale: int | None, detail: str) -> None:
        super().__init__(detail)
        self.step, self.scale, self.detail = step, scale, detail


def _check_indices(inst: BootstrapInstance) -> None:
    q, theta = inst.q, inst.theta
    if len(inst.a_values) != len(q) or len(inst.closeness) != len(q):
        msg = f"A ({len(inst.a_values)}) and closeness ({len(inst.closeness)}) must match Q ({len(q)})"
        raise PreconditionError(msg)
    if not q.start < inst.j1 < inst.m < theta.stop or inst.j1 < theta.start:
        msg = f"scales j1 = {inst.j1}, m = {inst.m} must lie inside the Theta range [{theta.start}, {theta.stop})"
        raise PreconditionError(msg)


def bootstrap_uniqueness(inst: BootstrapInstance, slack: float = 1e-9) -> BootstrapCertificate:
    """Run every step in order; the certificate is refused at the first failing step and scale."""
    _check_indices(inst)
    q, theta, delta = inst.q, inst.theta, inst.delta
    a = np.asarray(inst.a_values)
    closeness = np.asarray(inst.closeness)
    steps: list[StepRecord] = []
    result: dict[str, float] = {}

    def at(values: np.ndarray, j: int) -> float:
        return float(values[j - q.start])

    def monotonicity() -> str:
        rises = np.flatnonzero(np.diff(a) > slack * np.maximum(np.abs(a[:-1]), 1.0))
        if rises.size:
            j = int(rises[0]) + q.start + 1
            raise _Refused("monotonicity", j, f"A rises to {at(a, j):.6g} at scale {j}")
        if not q.verified_monotone:
            raise _Refused("monotonicity", None, "Q is not nonincreasing and nonnegative")
        return f"A and Q nonincreasing on [{q.start}, {q.stop})"

    def theta_relation() -> str:
        bad = relation_violations(theta, q, slack)
        if bad:
            raise _Refused("theta_relation", bad[0], f"Theta_{bad[0]} = {theta[bad[0]]:.6g} exceeds the Q drop")
        return f"Theta relation on [{theta.start}, {theta.stop})"

    seed = range(inst.j1, inst.j1 + inst.seed_scales)

    def hypothesis_a() -> str:
        for j in seed:
            if not at(closeness, j) < delta / 100.0:
                raise _Refused("hypothesis_A", j, f"closeness {at(closeness, j):.6g} >= delta / 100 at scale {j}")
        return f"closeness < {delta / 100.0:g} on scales {seed.start}..{seed.stop - 1}"

    def hypothesis_b() -> str:
        for k in range(inst.j1, inst.m + 1):
            drop = at(a, inst.j1) - at(a, k)
            if not drop < inst.epsilon:
                raise _Refused("hypothesis_B", k, f"A drops by {drop:.6g} >= epsilon = {inst.epsilon:g} at scale {k}")
        return f"A drop {at(a, inst.j1) - at(a, inst.m):.6g} < {inst.epsilon:g}"

    def seed_budget() -> str:
        start = max(at(closeness, j) for j in seed)
        if not start + 3.0 * delta / 100.0 < delta:
            raise _Refused("seed_budget", inst.j1, f"seed closeness {start:.6g} leaves no budget")
        result["budget"] = start
        return f"delta_j1 = {start:.6g}"

    def induction() -> str:
        budget = result["budget"]
        for k in range(inst.j1, inst.m):
            budget += 3.0 * theta[k]
            if not budget + 3.0 * delta / 100.0 < delta:
                raise _Refused("induction", k + 1, f"budget {budget:.6g} + 3 delta / 100 reaches delta")
            if at(closeness, k + 1) > budget * (1.0 + slack):
                raise _Refused(
                    "induction", k + 1, f"closeness {at(closeness, k + 1):.6g} exceeds the propagated {budget:.6g}"
                )
        result["budget"] = budget
        return f"delta_m = {budget:.6g} on k in [{inst.j1}, {inst.m - 1}]"

    def effective_bound() -> str:
        c_q = fitted_decay_constant(q, inst.beta)
        bound = sum_theta(theta, c_q, inst.beta, inst.j1, inst.gamma)
        tails = tail_sums(theta)
        for k in range(inst.j1, theta.stop):
            limit = bound.c_bar * k ** (-bound.beta_bar)
            if tails[k - theta.start] > limit * (1.0 + slack):
                raise _Refused("effective_bound", k, f"Theta tail {tails[k - theta.start]:.6g} exceeds {limit:.6g}")
        result.update(c_bar=bound.c_bar, beta_bar=bound.beta_bar, distance=cauchy_annuli(theta, inst.j1, inst.m))
        return f"sum Theta_(j>=k) <= {bound.c_bar:.6g} k^(-{bound.beta_bar:.6g}) for k in [{inst.j1}, {theta.stop})"

    checks = (monotonicity, theta_relation, hypothesis_a, hypothesis_b, seed_budget, induction, effective_bound)
    for name, check in zip(STEPS, checks, strict=True):
        try:
            steps.append(StepRecord(step=name, passed=True, detail=check()))
        except _Refused as refusal:
            steps.append(StepRecord(step=name, scale=refusal.scale, passed=False, detail=refusal.detail))
            logger.warning(f"Bootstrap of {inst.name} refused at {name} (scale {refusal.scale}): {refusal.detail}")
            return BootstrapCertificate(
                name=inst.name, accepted=False, failing_step=name, failing_scale=refusal.scale, steps=steps
            )

    logger.info(f"Bootstrap of {inst.name} certified: beta_bar = {result['beta_bar']:.6g}, C_bar = {result['c_bar']:.6g}")
    return BootstrapCertificate(
        name=inst.name,
        accepted=True,
        beta_bar=result["beta_bar"],
        c_bar=result["c_bar"],
        distance_bound=result["distance"],
        steps=steps,
    )


def forward_instance(
    length: int = 10_000,
    alpha: float = 0.5,
    c_prime: float = 1e-2,
    mu: float = 0.1,
    gamma: float | None = 0.6,
    c_mu: float = 1.0,
    q0: float = 1e-4,
    delta: float = 1.0,
    epsilon: float = 1e-2,
    j1: int = 2,
) -> BootstrapInstance:
    """Instance generated from the extremal Q(4^j) of the decay recursion, read 2-adically.

    Theta is the largest the relation allows and beta = alpha / (1 - alpha)
    is the rate the decay iteration proves for that recursion. The 2-adic
    sequence has length rounded up to an even number.
    """
    q = to_base2(extremal_sequence(q0, alpha, c_prime, (length + 1) // 2))
    theta = theta_from_Q(q, mu, c_mu)
    return BootstrapInstance(
        name="forward",
        a_values=(1.0 + q.array()).tolist(),
        q=q,
        theta=theta,
        closeness=[delta / 200.0] * len(q),
        delta=delta,
        epsilon=epsilon,
        j1=j1,
        m=theta.stop - 1,
        beta=alpha / (1.0 - alpha),
        gamma=gamma,
    )


def exact_cone_instance(length: int = 64, beta: float = 1.0, mu: float = 0.1, j1: int = 2) -> BootstrapInstance:
    """Theta and Q identically zero, A constant."""
    q = constant_sequence(0.0, length, base=2)
    theta = theta_from_Q(q, mu, 1.0)
    return BootstrapInstance(
        name="exact-cone",
        a_values=[1.0] * length,
        q=q,
        theta=theta,
        closeness=[0.0] * length,
        delta=1.0,
        epsilon=1e-2,
        j1=j1,
        m=theta.stop - 1,
        beta=beta,
    )


def adversarial_instances(length: int = 1_000, scale: int = 7) -> dict[str, tuple[BootstrapInstance, str, int]]:
    """Broken copies of the forward instance with the step and scale where each must be refused."""
    base = forward_instance(length)
    j1 = base.j1

    a_values = list(base.a_values)
    for j in range(scale, length):
        a_values[j] -= 2.0 * base.epsilon
    drop_a = base.model_copy(update={"name": "a-drop", "a_values": a_values})

    theta_values = list(base.theta.values)
    theta_values[scale - base.theta.start] *= 2.0
    theta = base.theta.model_copy(update={"values": theta_values})
    big_theta = base.model_copy(update={"name": "theta-spike", "theta": theta})

    seed = list(base.closeness)
    seed[j1 + 1] = base.delta / 50.0
    far_seed = base.model_copy(update={"name": "far-seed", "closeness": seed})

    jump = list(base.closeness)
    jump[scale] = 0.999 * base.delta
    far_annulus = base.model_copy(update={"name": "far-annulus", "closeness": jump})

    return {
        "a-drop": (drop_a, "hypothesis_B", scale),
        "theta-spike": (big_theta, "theta_relation", scale),
        "far-seed": (far_seed, "hypothesis_A", j1 + 1),
        "far-annulus": (far_annulus, "induction", scale),
    }
