"""Decay iteration, the series lemma and Theta summability on synthetic sequences."""

import numpy as np

from conelab.decay import (
    annulus_chain,
    extremal_sequence,
    feasible_split,
    iterate_decay,
    power_sequence,
    series_lemma,
    sum_theta,
    synthetic_annuli,
    theta_from_Q,
    to_base2,
    verify_alg_lemma,
)
from conelab.decay.sequences import fitted_decay_constant
from conelab.decay.theta import tail_sums
from conelab.models.base import DecayCertificate, MonotoneSeq
from conelab.suites.base import SuiteContext

SERIES_EXAMPLE = 0.195166
SERIES_BOUND = 0.2
CHAIN_ANNULI = 24
CHAIN_DIM = 8
J1 = 2


def _poly_ratio(cert: DecayCertificate) -> float:
    return next(item.lhs for item in cert.inequalities if item.name.startswith("Q(4^(j+1)) <= C_bound"))


def _log_ratio(cert: DecayCertificate) -> float:
    return next(item.lhs for item in cert.inequalities if item.name.startswith("Q(4^(j+1)) <= C_log"))


def _decay_chain(ctx: SuiteContext, alpha: float) -> None:
    cfg = ctx.config.decay
    seq = extremal_sequence(cfg.q0, alpha, cfg.c_prime, cfg.horizon)
    cert = iterate_decay(seq, alpha, cfg.c_prime, 0, cfg.horizon - 2)
    tag = f"alpha-{alpha:g}"
    ctx.certify(f"decay-{tag}", cert)
    ctx.flag(f"decay-accepted-{tag}", "the extremal sequence satisfies every step of the decay iteration", lambda: cert.accepted)
    ctx.check(
        f"decay-polynomial-{tag}",
        "Q(4^(j+1)) <= C_bound (j - j1)^(-1 - beta) with beta = alpha / (1 - alpha)",
        1.0,
        lambda: _poly_ratio(cert),
    )
    ctx.check(
        f"decay-logarithmic-{tag}",
        "Q(r) <= C_log log(r / r1)^(-1 - beta)",
        1.0,
        lambda: _log_ratio(cert),
    )
    beta = alpha / (1.0 - alpha)
    j = np.arange(1, cfg.horizon)
    ctx.curve(f"extremal-{tag}", j.tolist(), seq.array()[1:].tolist(), xlabel="j", ylabel="Q(4^j)", logx=True, logy=True)
    ctx.curve(
        f"decay-bound-{tag}",
        j[1:].tolist(),
        (cert.c_bound * (j[1:] - 1.0) ** (-1.0 - beta)).tolist(),
        xlabel="j",
        ylabel="C_bound (j - 1)^(-1 - beta)",
        logx=True,
        logy=True,
    )


def _theta_chain(ctx: SuiteContext, name: str, q: MonotoneSeq, beta: float) -> None:
    cfg = ctx.config.decay
    mu, gamma = feasible_split(beta, cfg.mu_step, cfg.gamma_step)
    theta = theta_from_Q(q, mu, 1.0)
    c_q = fitted_decay_constant(q, beta)
    result = sum_theta(theta, c_q, beta, J1, gamma)
    ctx.certify(
        f"theta-{name}",
        {"mu": mu, "gamma": gamma, "beta_bar": result.beta_bar, "c_bar": result.c_bar, "direct": result.direct},
    )
    ctx.flag(f"theta-sum-{name}", "sum_(j >= j1) Theta_j <= C_bar j1^(-beta_bar)", lambda: result.holds)

    def worst_tail() -> float:
        k = np.arange(max(J1, theta.start), theta.stop)
        tails = tail_sums(theta)[k - theta.start]
        return float(np.max(tails / (result.c_bar * k ** (-result.beta_bar))))

    ctx.check(f"theta-tails-{name}", "every tail from k >= j1 stays below C_bar k^(-beta_bar)", 1.0, worst_tail)

    distances = synthetic_annuli(theta, J1, CHAIN_ANNULI, CHAIN_DIM, ctx.rng)
    chain = annulus_chain(distances, theta, J1)
    ctx.certify(f"annuli-{name}", chain._asdict())
    ctx.flag(f"annulus-chain-{name}", "distances between rescaled annuli are bounded by 3 sum Theta_j", lambda: chain.holds)

    k = np.arange(theta.start, theta.stop)
    ctx.curve(f"theta-tail-{name}", k.tolist(), tail_sums(theta).tolist(), xlabel="k", ylabel="sum_(j>=k) Theta_j", logx=True, logy=True)


def run(ctx: SuiteContext) -> None:
    """Algebraic lemma grid, decay certificates per exponent, the series example and Theta sums."""
    cfg = ctx.config.decay

    grid_check = verify_alg_lemma(cfg.alg_grid)
    ctx.certify("alg-lemma", grid_check._asdict())
    ctx.check(
        "alg-lemma-grid",
        "a^(alpha-1) - b^(alpha-1) >= C(alpha, C') whenever a^(2-alpha) <= C' (b - a)",
        0.0,
        lambda: float(grid_check.violations),
    )

    for alpha in cfg.alphas:
        _decay_chain(ctx, alpha)

    j = np.arange(1, cfg.horizon + 1, dtype=float)
    example = series_lemma(MonotoneSeq(values=(j**-2.0).tolist(), start=1), 1.0, 1.0, 1, 1.0, 10)
    ctx.certify("series-example", {**example._asdict(), "total": example.total})
    ctx.check(
        "series-example",
        "sum_(j >= 10) (a_j - a_(j+1)) j = 0.195166 for a_j = j^(-2)",
        ctx.tol.series_digits,
        lambda: abs(example.total - SERIES_EXAMPLE),
    )
    ctx.check(
        "series-bound",
        "the series lemma bound C k (beta + 1) / (beta + 1 - nu) m^(nu - 1 - beta) = 0.2",
        ctx.tol.consistency,
        lambda: abs(example.bound - SERIES_BOUND),
    )
    ctx.flag("series-holds", "the direct sum respects the series lemma bound", lambda: example.holds)

    _theta_chain(ctx, "power", power_sequence(1e-3, 1.0, cfg.horizon), 1.0)
    alpha = 0.5
    extremal = to_base2(extremal_sequence(cfg.q0, alpha, cfg.c_prime, cfg.horizon // 2))
    _theta_chain(ctx, "extremal", extremal, alpha / (1.0 - alpha))
