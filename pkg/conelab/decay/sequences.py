"""Synthetic Q sequences and conversions between 4-adic and 2-adic indexing.

Q_j stands for Q(4^j) in the decay iteration and for Q(2^j) when it feeds
the Theta relation. Conversions keep upper envelopes: a missing odd 2-adic
value is bounded by the preceding 4-adic one, which is valid for every
nonincreasing Q.
"""

import numpy as np
from scipy.optimize import brentq

from conelab.errors import PreconditionError
from conelab.models.base import MonotoneSeq


def recursion_successor(q: float, alpha: float, c_prime: float) -> float:
    """The x in (0, q) with x^(2 - alpha) = C' (q - x)."""
    if q <= 0.0:
        return 0.0
    return float(
        brentq(lambda x: x ** (2.0 - alpha) - c_prime * (q - x), 0.0, q, xtol=1e-300, rtol=4 * np.finfo(float).eps)
    )


def extremal_sequence(
    q0: float, alpha: float, c_prime: float, length: int, slack: float = 1e-9, start: int = 0
) -> MonotoneSeq:
    """Sequence with equality in the recursion for C' (1 - slack), so it holds strictly for C'."""
    if not 0.0 < alpha < 1.0:
        msg = f"alpha must lie in (0, 1), got {alpha}"
        raise PreconditionError(msg)
    if not 0.0 < q0 <= 1.0:
        msg = f"first value must lie in (0, 1], got {q0}"
        raise PreconditionError(msg)
    values = [q0]
    for _ in range(length - 1):
        values.append(recursion_successor(values[-1], alpha, c_prime * (1.0 - slack)))
    return MonotoneSeq(values=values, start=start, base=4)


def power_sequence(q0: float, beta: float, length: int, start: int = 0, base: int = 2) -> MonotoneSeq:
    """Q_j = q0 (j + 1)^(-1 - beta)."""
    j = np.arange(start, start + length, dtype=float)
    return MonotoneSeq(values=(q0 * (j + 1.0) ** (-1.0 - beta)).tolist(), start=start, base=base)


def constant_sequence(value: float, length: int, start: int = 0, base: int = 4) -> MonotoneSeq:
    """Q_j = value, the profile of an exact cone when value = 0."""
    return MonotoneSeq(values=[value] * length, start=start, base=base)


def to_base2(q: MonotoneSeq) -> MonotoneSeq:
    """Q(2^i) from Q(4^j): even i exact, odd i bounded by Q(2^(i-1))."""
    if q.base != 4:
        msg = f"expected a 4-adic sequence, got base {q.base}"
        raise PreconditionError(msg)
    return MonotoneSeq(values=np.repeat(q.array(), 2).tolist(), start=2 * q.start, base=2)


def to_base4(q: MonotoneSeq) -> MonotoneSeq:
    """Q(4^j) = Q(2^(2j)) from a 2-adic sequence."""
    if q.base != 2:
        msg = f"expected a 2-adic sequence, got base {q.base}"
        raise PreconditionError(msg)
    first = q.start + q.start % 2
    return MonotoneSeq(values=[q[i] for i in range(first, q.stop, 2)], start=first // 2, base=4)


def fitted_decay_constant(q: MonotoneSeq, beta: float) -> float:
    """Smallest C with Q_j <= C j^(-1 - beta) for every stored j >= 1."""
    j = np.arange(q.start, q.stop, dtype=float)
    mask = j >= 1.0
    if not np.any(mask):
        return 0.0
    return float(np.max(q.array()[mask] * j[mask] ** (1.0 + beta)))
