"""Theta envelopes, their summability and the Cauchy criterion for annuli.

Theta_j is the scale-invariant distance at r = 2^j, controlled through

    Theta_j^(2 + mu) <= C_mu (Q_(j-1) - Q_(j+3))

by a 2-adic Q. Summing Theta splits with Hoelder into a weighted sum of Q
drops, handled by the series lemma with k = 4 and nu = gamma (2 + mu), and
a zeta tail. The split is admissible when (2 + mu) gamma / (1 + mu) > 1 and
gamma (2 + mu) < 1 + beta.
"""

from typing import NamedTuple

import numpy as np
from numpy.typing import NDArray
from scipy.special import zeta

from conelab.decay.lemmas import series_bound
from conelab.errors import PreconditionError
from conelab.models.base import MonotoneSeq, ThetaSeq
from conelab.utils.logger import logger

MU_RANGE = (0.01, 1.0)
GAMMA_RANGE = (0.5, 1.0)


def theta_from_Q(q: MonotoneSeq, mu: float, c_mu: float) -> ThetaSeq:
    """Largest Theta_j = (C_mu (Q_(j-1) - Q_(j+3)))^(1 / (2 + mu)) allowed by the relation."""
    if not q.verified_monotone:
        msg = "Theta envelope needs a nonincreasing nonnegative Q"
        raise PreconditionError(msg)
    if q.base != 2:
        msg = f"Theta is indexed 2-adically, got a base-{q.base} Q"
        raise PreconditionError(msg)
    if len(q) < 5:
        msg = f"need at least 5 values of Q, got {len(q)}"
        raise PreconditionError(msg)
    v = q.array()
    drops = np.maximum(v[:-4] - v[4:], 0.0)
    return ThetaSeq(values=((c_mu * drops) ** (1.0 / (2.0 + mu))).tolist(), start=q.start + 1, mu=mu, c_mu=c_mu)


def relation_violations(theta: ThetaSeq, q: MonotoneSeq, slack: float = 1e-9) -> list[int]:
    """Indices where Theta_j^(2 + mu) exceeds C_mu (Q_(j-1) - Q_(j+3))."""
    bad = []
    for j in range(theta.start, theta.stop):
        if j - 1 < q.start or j + 3 >= q.stop:
            msg = f"Theta_{j} needs Q_{j - 1} and Q_{j + 3}, stored Q covers [{q.start}, {q.stop})"
            raise PreconditionError(msg)
        lhs = theta[j] ** (2.0 + theta.mu)
        rhs = theta.c_mu * (q[j - 1] - q[j + 3])
        if lhs > rhs * (1.0 + slack):
            bad.append(j)
    return bad


def check_split(mu: float, gamma: float, beta: float) -> None:
    """Raise with the violated constraint when (mu, gamma) does not admit the Hoelder split."""
    if (2.0 + mu) * gamma / (1.0 + mu) <= 1.0:
        msg = f"(2 + mu) gamma / (1 + mu) = {(2.0 + mu) * gamma / (1.0 + mu):.6g} must exceed 1"
        raise PreconditionError(msg)
    if gamma * (2.0 + mu) >= 1.0 + beta:
        msg = f"gamma (2 + mu) = {gamma * (2.0 + mu):.6g} must be below 1 + beta = {1.0 + beta:.6g}"
        raise PreconditionError(msg)


def beta_bar(mu: float, gamma: float, beta: float) -> float:
    """(1 + beta - gamma (2 + mu)) / (2 + mu)."""
    return (1.0 + beta - gamma * (2.0 + mu)) / (2.0 + mu)


def feasible_split(beta: float, mu_step: float = 1e-3, gamma_step: float = 1e-3) -> tuple[float, float]:
    """First (mu, gamma) on the search grid maximizing beta_bar."""
    mu = np.arange(MU_RANGE[0], MU_RANGE[1] + 0.5 * mu_step, mu_step)
    gamma = np.arange(GAMMA_RANGE[0] + gamma_step, GAMMA_RANGE[1] - 0.5 * gamma_step, gamma_step)
    M, Gm = np.meshgrid(mu, gamma, indexing="ij")
    ok = ((2.0 + M) * Gm / (1.0 + M) > 1.0) & (Gm * (2.0 + M) < 1.0 + beta)
    if not np.any(ok):
        msg = (
            f"no (mu, gamma) in [{MU_RANGE[0]}, {MU_RANGE[1]}] x ({GAMMA_RANGE[0]}, {GAMMA_RANGE[1]}) "
            f"satisfies (2 + mu) gamma / (1 + mu) > 1 and gamma (2 + mu) < 1 + beta for beta = {beta:g}"
        )
        raise PreconditionError(msg)
    score = np.where(ok, (1.0 + beta - Gm * (2.0 + M)) / (2.0 + M), -np.inf)
    i, k = np.unravel_index(int(np.argmax(score)), score.shape)
    logger.debug(f"Split for beta = {beta:g}: mu = {mu[i]:.4g}, gamma = {gamma[k]:.4g}, beta_bar = {score[i, k]:.6g}")
    return float(mu[i]), float(gamma[k])


def c_bar(c_mu: float, c_q: float, mu: float, gamma: float, beta: float) -> float:
    """Constant of sum_{j >= j1} Theta_j <= C_bar j1^(-beta_bar) for j1 >= 2."""
    check_split(mu, gamma, beta)
    nu = gamma * (2.0 + mu)
    p = 2.0 + mu
    weighted = c_mu * 2.0**nu * series_bound(c_q, beta, 4, nu, 1)
    return 2.0 ** beta_bar(mu, gamma, beta) * weighted ** (1.0 / p) * float(zeta(nu / (1.0 + mu))) ** ((1.0 + mu) / p)


class ThetaSum(NamedTuple):
    """Bound on the Theta tail from j1 against the direct sum."""

    bound: float
    c_bar: float
    beta_bar: float
    direct: float

    @property
    def holds(self) -> bool:
        """Direct tail within the bound."""
        return self.direct <= self.bound * (1.0 + 1e-12)


def feasible_gamma(mu: float, beta: float, gamma_step: float = 1e-3) -> float:
    """Smallest gamma on the search grid admitting the split for a fixed mu."""
    gamma = np.arange(GAMMA_RANGE[0] + gamma_step, GAMMA_RANGE[1] - 0.5 * gamma_step, gamma_step)
    ok = ((2.0 + mu) * gamma / (1.0 + mu) > 1.0) & (gamma * (2.0 + mu) < 1.0 + beta)
    if not np.any(ok):
        msg = f"no gamma in ({GAMMA_RANGE[0]}, {GAMMA_RANGE[1]}) admits the split for mu = {mu:g}, beta = {beta:g}"
        raise PreconditionError(msg)
    return float(gamma[np.argmax(ok)])


def sum_theta(theta: ThetaSeq, c_q: float, beta: float, j1: int, gamma: float | None = None) -> ThetaSum:
    """Bound sum_{j >= j1} Theta_j by C_bar j1^(-beta_bar) when Q_j <= c_q j^(-1 - beta)."""
    if j1 < 2:
        msg = f"j1 must be at least 2, got {j1}"
        raise PreconditionError(msg)
    mu = theta.mu
    if gamma is None:
        gamma = feasible_gamma(mu, beta)
    constant = c_bar(theta.c_mu, c_q, mu, gamma, beta)
    exponent = beta_bar(mu, gamma, beta)
    direct = float(np.sum(theta.array()[max(j1 - theta.start, 0) :]))
    return ThetaSum(constant * j1 ** (-exponent), constant, exponent, direct)


def tail_sums(theta: ThetaSeq) -> NDArray:
    """sum_{j >= k} Theta_j for every stored k."""
    return np.cumsum(theta.array()[::-1])[::-1]


def cauchy_annuli(theta: ThetaSeq, j1: int, j2: int | None = None) -> float:
    """3 sum_{j1 <= j <= j2} Theta_j, bounding every distance between rescaled annuli in that range."""
    last = theta.stop - 1 if j2 is None else j2
    if j1 < theta.start or last >= theta.stop or last < j1 - 1:
        msg = f"range [{j1}, {last}] outside the stored indices [{theta.start}, {theta.stop})"
        raise PreconditionError(msg)
    return 3.0 * float(np.sum(theta.array()[j1 - theta.start : last - theta.start + 1]))


class ChainReport(NamedTuple):
    """Triangle chain of pairwise annulus distances."""

    sup_distance: float
    chain_sum: float
    bound: float

    @property
    def holds(self) -> bool:
        """sup distance <= chain sum <= 3 sum Theta."""
        return self.sup_distance <= self.chain_sum * (1.0 + 1e-12) and self.chain_sum <= self.bound * (1.0 + 1e-12)


def annulus_chain(distances: NDArray, theta: ThetaSeq, j1: int) -> ChainReport:
    """Check sup_(i<k) d(A_i, A_k) <= sum d(A_j, A_(j+1)) <= 3 sum Theta_j for annuli j1, j1 + 1, ..."""
    d = np.asarray(distances, dtype=float)
    count = d.shape[0]
    if d.shape != (count, count):
        msg = f"distances must be a square matrix, got shape {d.shape}"
        raise PreconditionError(msg)
    consecutive = np.diag(d, k=1)
    return ChainReport(float(np.max(d)), float(np.sum(consecutive)), cauchy_annuli(theta, j1, j1 + count - 2))


def synthetic_annuli(theta: ThetaSeq, j1: int, count: int, dim: int, rng: np.random.Generator) -> NDArray:
    """Pairwise distances of points whose consecutive gaps are at most 3 Theta_j."""
    steps = rng.standard_normal((count - 1, dim))
    steps /= np.linalg.norm(steps, axis=1, keepdims=True)
    lengths = 3.0 * theta.array()[j1 - theta.start : j1 - theta.start + count - 1] * rng.uniform(size=count - 1)
    points = np.vstack([np.zeros(dim), np.cumsum(steps * lengths[:, None], axis=0)])
    return np.linalg.norm(points[:, None, :] - points[None, :, :], axis=-1)
