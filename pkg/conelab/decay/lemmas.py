"""The algebraic lemma, the one-step recursion, the decay iteration and the series lemma.

The algebraic lemma is used with the two-branch constant

    C(alpha, C') = min{1 - 2^(alpha - 1), (1 - alpha) 2^(alpha - 2) / C'}

split at b = 2a. For b >= 2a the difference is at least a^(alpha-1)
(1 - 2^(alpha-1)) and a <= 1; for b < 2a the integrand t^(alpha-2) of the
difference is bounded below by its value at b, which is at least
(2a)^(alpha-2), and the recursion gives b - a >= a^(2-alpha) / C'. The
single constant (1 - alpha) / C' one would get by bounding with the maximum
of the integrand is not a lower bound in general.
"""

import math
from typing import NamedTuple

import numpy as np

from conelab.errors import PreconditionError
from conelab.models.base import DecayCertificate, MonotoneSeq, VerifiedInequality
from conelab.utils.logger import logger


class AlgBound(NamedTuple):
    """Both sides of a^(alpha-1) - b^(alpha-1) >= C."""

    lhs: float
    constant: float

    @property
    def holds(self) -> bool:
        """lhs >= C."""
        return self.lhs >= self.constant


def alg_constant(alpha: float, c_prime: float) -> float:
    """The corrected constant C(alpha, C')."""
    if not 0.0 < alpha < 1.0 or c_prime <= 0.0:
        msg = f"need alpha in (0, 1) and C' > 0, got alpha = {alpha}, C' = {c_prime}"
        raise PreconditionError(msg)
    return min(1.0 - 2.0 ** (alpha - 1.0), (1.0 - alpha) * 2.0 ** (alpha - 2.0) / c_prime)


def alg_lemma(a: float, b: float, alpha: float, c_prime: float, slack: float = 1e-12) -> AlgBound:
    """Lower bound on a^(alpha-1) - b^(alpha-1) when a^(2-alpha) <= C' (b - a)."""
    constant = alg_constant(alpha, c_prime)
    if not 0.0 < a < b <= 1.0:
        msg = f"need 0 < a < b <= 1, got a = {a}, b = {b}"
        raise PreconditionError(msg)
    if a ** (2.0 - alpha) > c_prime * (b - a) * (1.0 + slack):
        msg = f"a^(2 - alpha) = {a ** (2.0 - alpha):.6g} exceeds C' (b - a) = {c_prime * (b - a):.6g}"
        raise PreconditionError(msg)
    return AlgBound(a ** (alpha - 1.0) - b ** (alpha - 1.0), constant)


class GridCheck(NamedTuple):
    """Outcome of a brute-force check over a parameter grid."""

    points: int
    checked: int
    violations: int
    worst_margin: float


def verify_alg_lemma(points_per_axis: int = 10) -> GridCheck:
    """Check the corrected constant on a (a, b, alpha, C') grid, skipping points outside the hypotheses."""
    a_axis = np.geomspace(1e-3, 0.9, points_per_axis)
    t_axis = np.linspace(0.05, 1.0, points_per_axis)
    alpha_axis = np.linspace(0.05, 0.95, points_per_axis)
    c_axis = np.geomspace(1e-2, 1e2, points_per_axis)
    a, t, alpha, c = np.meshgrid(a_axis, t_axis, alpha_axis, c_axis, indexing="ij")
    b = a + t * (1.0 - a)
    admissible = a ** (2.0 - alpha) <= c * (b - a)
    constant = np.minimum(1.0 - 2.0 ** (alpha - 1.0), (1.0 - alpha) * 2.0 ** (alpha - 2.0) / c)
    margin = (a ** (alpha - 1.0) - b ** (alpha - 1.0)) - constant
    checked = int(np.count_nonzero(admissible))
    worst = float(np.min(margin[admissible])) if checked else math.inf
    return GridCheck(a.size, checked, int(np.count_nonzero(margin[admissible] < 0.0)), worst)


def o3_step(q_half: float, q_double: float, alpha: float, c: float) -> bool:
    """Q(2r)^(2 - alpha) <= C (Q(r/2) - Q(2r))."""
    if q_half < 0.0 or q_double < 0.0:
        msg = f"Q values must be nonnegative, got {q_half}, {q_double}"
        raise PreconditionError(msg)
    return q_double ** (2.0 - alpha) <= c * (q_half - q_double)


def _inv_power(x: float, alpha: float) -> float:
    return math.inf if x == 0.0 else x ** (alpha - 1.0)


def _increment(b: float, a: float, alpha: float) -> float:
    # a^(alpha-1) - b^(alpha-1), infinite once the sequence has reached 0
    return math.inf if a == 0.0 else a ** (alpha - 1.0) - b ** (alpha - 1.0)


def iterate_decay(seq: MonotoneSeq, alpha: float, c_prime: float, j1: int, j2: int) -> DecayCertificate:
    """Run the recursion from j1 to j2 and certify Q(4^(j+1)) <= C_bound (j - j1)^(-1 - beta).

    Q_j is Q(4^j), so the recursion at r = 2 4^j links Q_j and Q_(j+1).
    The certificate is refused at the first j where the recursion fails.
    """
    if not seq.start <= j1 < j2 < seq.stop - 1:
        msg = f"need {seq.start} <= j1 < j2 < {seq.stop - 1}, got j1 = {j1}, j2 = {j2}"
        raise PreconditionError(msg)
    q = seq.array()
    if np.any(q < 0.0) or np.any(q > 1.0):
        msg = "Q values must lie in [0, 1]"
        raise PreconditionError(msg)
    c = alg_constant(alpha, c_prime)
    beta = alpha / (1.0 - alpha)
    c_bound = c ** (-1.0 - beta)
    c_log = (2.0 * math.log(4.0)) ** (1.0 + beta) * c_bound
    base = {"alpha": alpha, "c_prime": c_prime, "c": c, "c_bound": c_bound, "c_log": c_log, "j1": j1, "j2": j2}
    monotone = seq.verified_monotone

    for j in range(j1, j2 + 1):
        if not o3_step(seq[j], seq[j + 1], alpha, c_prime):
            logger.warning(f"Decay certificate refused: recursion fails at j = {j} (Q_j = {seq[j]:.6g})")
            return DecayCertificate(**base, monotone=monotone, accepted=False, failing_index=j)

    increments = [(j, _increment(seq[j], seq[j + 1], alpha)) for j in range(j1 + 1, j2 + 1)]
    j_min, inc_min = min(increments, key=lambda item: item[1])
    telescoped = _inv_power(seq[j1 + 1], alpha) + c * (j2 - j1)
    ratios = [(j, seq[j + 1] / (c_bound * (j - j1) ** (-1.0 - beta))) for j in range(j1 + 1, j2 + 1)]
    j_poly, ratio_poly = max(ratios, key=lambda item: item[1])
    log_ratios = [
        (j, seq[j + 1] / (c_log * ((j + 1 - j1) * math.log(4.0)) ** (-1.0 - beta))) for j in range(j1 + 1, j2 + 1)
    ]
    j_log, ratio_log = max(log_ratios, key=lambda item: item[1])

    inequalities = [
        VerifiedInequality(name="step increment >= C", index=j_min, lhs=c, rhs=inc_min),
        VerifiedInequality(
            name="Q(4^(j2+1))^(alpha-1) >= Q(4^(j1+1))^(alpha-1) + C (j2 - j1)",
            index=j2,
            lhs=telescoped,
            rhs=_inv_power(seq[j2 + 1], alpha),
        ),
        VerifiedInequality(name="Q(4^(j+1)) <= C_bound (j - j1)^(-1-beta)", index=j_poly, lhs=ratio_poly, rhs=1.0),
        VerifiedInequality(
            name="Q(4^(j+1)) <= C_log / log(4^(j+1) / 4^j1)^(1+beta)", index=j_log, lhs=ratio_log, rhs=1.0
        ),
    ]
    accepted = all(item.holds for item in inequalities)
    failing = None if accepted else next(item.index for item in inequalities if not item.holds)
    if accepted:
        logger.info(f"Decay certificate for alpha = {alpha:g}: beta = {beta:.6g}, C_bound = {c_bound:.6g}")
    else:
        logger.warning(f"Decay certificate for alpha = {alpha:g} refused at j = {failing}")
    return DecayCertificate(
        **base, monotone=monotone, accepted=accepted, failing_index=failing, inequalities=inequalities
    )


class SeriesBound(NamedTuple):
    """Series lemma bound against the direct partial sum and a tail estimate."""

    bound: float
    partial_sum: float
    tail: float
    last_index: int

    @property
    def total(self) -> float:
        """Partial sum plus the tail estimate."""
        return self.partial_sum + self.tail

    @property
    def holds(self) -> bool:
        """Partial sum plus tail within the bound."""
        return self.total <= self.bound * (1.0 + 1e-12)


def series_bound(c: float, beta: float, k: int, nu: float, m: int) -> float:
    """C k (beta + 1) / (beta + 1 - nu) m^(nu - 1 - beta)."""
    if beta <= 0.0:
        msg = f"beta must be positive, got {beta}"
        raise PreconditionError(msg)
    if not 1.0 <= nu < 1.0 + beta:
        msg = f"nu must lie in [1, 1 + beta) = [1, {1.0 + beta:g}), got {nu}"
        raise PreconditionError(msg)
    if k < 0 or m < 1:
        msg = f"need k >= 0 and m >= 1, got k = {k}, m = {m}"
        raise PreconditionError(msg)
    return c * k * (beta + 1.0) / (beta + 1.0 - nu) * m ** (nu - 1.0 - beta)


def series_lemma(a: MonotoneSeq, c: float, beta: float, k: int, nu: float, m: int) -> SeriesBound:
    """Bound sum_{j >= m} (a_j - a_(j+k)) j^nu for a_j <= C j^(-1 - beta), checked by direct summation.

    The sum runs to the last index J with a_(J+k) stored; the part beyond J
    is estimated by the same bound started at J + 1.
    """
    bound = series_bound(c, beta, k, nu, m)
    if not a.verified_monotone:
        msg = "series lemma needs a nonincreasing nonnegative sequence"
        raise PreconditionError(msg)
    last = a.stop - 1 - k
    if m < a.start or last < m:
        msg = f"sequence indices [{a.start}, {a.stop}) do not cover m = {m} with shift k = {k}"
        raise PreconditionError(msg)
    values = a.array()
    j = np.arange(m, last + 1, dtype=float)
    lo = m - a.start
    diff = values[lo : lo + j.size] - values[lo + k : lo + k + j.size]
    partial = float(np.sum(diff * j**nu))
    tail = series_bound(c, beta, k, nu, last + 1)
    return SeriesBound(bound, partial, tail, last)
