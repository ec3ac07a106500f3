"""Identities for the trace-free Hessian B_b and the level sets of b.

Each identity is evaluated as a scale-invariant residual
|lhs - rhs| / (|lhs| + |rhs| + scale), where scale is the natural size of
the terms (|grad b|^2, or |grad b|^2 / b for the divergence). The metric-
general group holds on any model where b comes from a harmonic G. The
Ricci group carries the ambient curvature terms explicitly; its Ricci-flat form
drops them and is only expected to hold on Ricci-flat models.
"""

from dataclasses import dataclass, field

import numpy as np

from conelab.cones.levelset import LevelSetData

GENERAL = ("k1", "k1_unit", "tracefree_mean", "tracefree_ii0", "decomposition", "b0")
RICCI = ("k2", "deltanu", "r1", "riccitan")


def _residual(lhs: float | np.ndarray, rhs: float | np.ndarray, scale: float) -> float:
    lhs, rhs = np.atleast_1d(lhs), np.atleast_1d(rhs)
    diff = float(np.max(np.abs(lhs - rhs)))
    return diff / (float(np.max(np.abs(lhs))) + float(np.max(np.abs(rhs))) + scale)


@dataclass
class IdentityReport:
    """Residuals per identity, grouped."""

    general: dict[str, float] = field(default_factory=dict)
    ricci: dict[str, float] = field(default_factory=dict)
    ricci_flat: dict[str, float] = field(default_factory=dict)

    def worst(self, group: str) -> float:
        """Largest residual of a group."""
        values = getattr(self, group).values()
        return max(values, default=0.0)


def check_level_identities(d: LevelSetData) -> IdentityReport:
    """Evaluate every identity at one level."""
    n, b, b1, b2, b3 = d.n, d.level, d.b1, d.b2, d.b3
    s1 = b1**2
    bnn, btan, bnt = d.b_nn, d.b_tan, d.b_normal_tangential
    bn2 = bnn**2 + float(bnt @ bnt)
    norm2 = d.norm2
    H = d.H
    report = IdentityReport()

    # b grad |grad b|^2 = B_b(grad b), normal component
    report.general["k1"] = _residual(b * 2.0 * b1 * b2, bnn * b1, s1)
    report.general["k1_unit"] = _residual(2.0 * b * b2, bnn, s1)
    report.general["tracefree_mean"] = _residual(2.0 * b * b1 * H, 2.0 * (n - 1) * s1 - bnn, s1)
    report.general["tracefree_ii0"] = _residual(2.0 * b * b1 * d.ii0, btan + bnn / (n - 1), s1)
    report.general["decomposition"] = _residual(norm2, float(btan @ btan) + 2.0 * float(bnt @ bnt) + bnn**2, s1**2)
    lhs_b0 = 4.0 * b**2 * s1 * float(d.ii0 @ d.ii0)
    report.general["b0"] = max(
        _residual(lhs_b0, float(btan @ btan) - bnn**2 / (n - 1), s1**2),
        _residual(lhs_b0, norm2 - 2.0 * float(bnt @ bnt) - n / (n - 1) * bnn**2, s1**2),
        _residual(lhs_b0, norm2 - n / (n - 1) * bn2 - (n - 2) / (n - 1) * float(bnt @ bnt), s1**2),
    )

    divergence = d.b_nn1 + float(np.sum(d.kappa * (bnn - btan)))
    k2_flat = (2 * n - 2) * 2.0 * b1 * b2
    k2_ricci = d.ric_nn * 2.0 * b * b1
    report.ricci["k2"] = _residual(divergence, k2_flat + k2_ricci, s1 / b)
    report.ricci_flat["k2"] = _residual(divergence, k2_flat, s1 / b)

    lap = 2.0 * (b2**2 + b1 * b3) + H * 2.0 * b1 * b2
    dn_flat = 0.5 * norm2 + (2 * n - 4) * bnn * s1
    dn_ricci = 2.0 * b**2 * d.ric_nn * s1
    report.ricci["deltanu"] = _residual(b**2 * lap, dn_flat + dn_ricci, s1)
    report.ricci_flat["deltanu"] = _residual(b**2 * lap, dn_flat, s1)

    r1_lhs = 4.0 * b**2 * s1 * d.level_scalar
    r1_flat = 4 * (n - 1) * (n - 2) * s1**2 - 4 * (n - 2) * s1 * bnn - norm2 + 2.0 * bn2
    r1_ambient = 4.0 * b**2 * s1 * d.ambient_gauss()
    report.ricci["r1"] = _residual(r1_lhs, r1_flat + r1_ambient, s1**2)
    report.ricci_flat["r1"] = _residual(r1_lhs, r1_flat, s1**2)

    gauss = d.ric_tan - d.sectional_n + d.kappa * (H - d.kappa)
    report.ricci["riccitan"] = _residual(b**2 * d.level_ricci, b**2 * gauss, s1)
    report.ricci_flat["riccitan"] = _residual(
        b**2 * d.level_ricci, b**2 * (-d.sectional_n + d.kappa * (H - d.kappa)), s1
    )
    return report

