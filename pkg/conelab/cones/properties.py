"""Gradient and lower bounds of R on level sets against annulus integrals of B_b.

On a Ricci-flat model the right side of both bounds is the annulus integral
of b^{-n} |B_b|^2 over R/2 <= b <= 3R/2. Warped models are not Ricci flat,
so the right side used here also carries the integral of b^{4-n} |Ric|^2
over the same annulus; the two agree when Ric vanishes.
"""

from dataclasses import dataclass, field

import numpy as np

from conelab.cones.green import GreenProfile, solve_green_radial
from conelab.cones.levelset import a_value, level_data, levelset_pair, trace_free_hessian
from conelab.cones.levelset import integrate_s as _integrate
from conelab.cones.warped import WarpedModel
from conelab.errors import ModelError
from conelab.functionals.background import BackgroundData
from conelab.functionals.energies import eval_R
from conelab.functionals.gradients import project_gradient
from conelab.models.base import InequalityReport
from conelab.utils.logger import logger


def _annulus(m: WarpedModel, gp: GreenProfile, R: float) -> tuple[float, float]:
    lo, hi = gp.level_range
    if 0.5 * R < lo or 1.5 * R > hi:
        msg = f"annulus [{0.5 * R:g}, {1.5 * R:g}] exceeds the levels [{lo:g}, {hi:g}] of {m.name}"
        raise ModelError(msg)
    return gp.level_s(0.5 * R), gp.level_s(1.5 * R)


def annulus_integral(m: WarpedModel, gp: GreenProfile, R: float) -> float:
    """Integral of b^{-n} |B_b|^2 over R/2 <= b <= 3R/2."""
    lo, hi = _annulus(m, gp, R)

    def density(s: float) -> float:
        d = trace_free_hessian(m, gp, s, check=False)
        return d.level ** (-m.n) * d.norm2 * d.area

    return _integrate(m, density, lo, hi)


def ricci_integral(m: WarpedModel, gp: GreenProfile, R: float) -> float:
    """Integral of b^{4-n} |Ric|^2 over R/2 <= b <= 3R/2."""
    lo, hi = _annulus(m, gp, R)

    def density(s: float) -> float:
        return float(gp.b(s) ** (4 - m.n) * m.ricci_norm2(s) * m.area * m.f(s) ** (m.n - 1))

    return _integrate(m, density, lo, hi)


def annulus_bound(m: WarpedModel, gp: GreenProfile, R: float) -> float:
    """Right side shared by both properties and the C^1 bound."""
    return annulus_integral(m, gp, R) + ricci_integral(m, gp, R)


def check_property4(m: WarpedModel, gp: GreenProfile, R: float, base: BackgroundData) -> InequalityReport:
    """|grad_1 R(R^{-2} g_R, |grad b|)|^2 against the annulus bound."""
    pair = levelset_pair(level_data(m, gp, R), base)
    gradient = project_gradient(pair, base)
    return InequalityReport(name="property4", lhs=base.norm(gradient) ** 2, rhs=annulus_bound(m, gp, R))


def check_property5(m: WarpedModel, gp: GreenProfile, R: float, base: BackgroundData) -> InequalityReport:
    """A(R) against R(R^{-2} g_R, |grad b|) plus the annulus bound."""
    d = level_data(m, gp, R)
    value = eval_R(levelset_pair(d, base))
    return InequalityReport(name="property5", lhs=a_value(d), rhs=annulus_bound(m, gp, R), offset=value)


def c1_bound(m: WarpedModel, gp: GreenProfile, R: float) -> InequalityReport:
    """|B_b|^2 + R^2 |grad B_b|^2 on the level against the annulus bound."""
    d = level_data(m, gp, R)
    return InequalityReport(name="c1", lhs=d.norm2 + R**2 * d.grad_norm2, rhs=annulus_bound(m, gp, R))


def sample_levels(gp: GreenProfile, count: int) -> list[float]:
    """Geometric levels whose annuli fit inside the model."""
    lo, hi = gp.level_range
    first, last = 2.0 * lo * 1.01, hi / 1.5 / 1.01
    if first >= last:
        msg = f"model levels [{lo:g}, {hi:g}] are too narrow for annulus checks"
        raise ModelError(msg)
    return np.geomspace(first, last, count).tolist()


@dataclass
class FamilyReport:
    """Fitted constants per model and their spread across the family."""

    names: list[str] = field(default_factory=list)
    constants: dict[str, list[float]] = field(default_factory=dict)
    reports: dict[str, list[list[InequalityReport]]] = field(default_factory=dict)

    def spread(self, kind: str) -> float:
        """max / min of the positive fitted constants; 1 when fewer than two are positive."""
        positive = [c for c in self.constants[kind] if c > 0.0]
        if len(positive) < 2:
            return 1.0
        return max(positive) / min(positive)

    def uniform(self, kind: str) -> float:
        """Largest fitted constant over the family."""
        return max(self.constants[kind], default=0.0)

    def all_hold(self, kind: str) -> bool:
        """Every sampled inequality holds with the uniform constant."""
        c = self.uniform(kind)
        return all(r.holds(c) for per_model in self.reports[kind] for r in per_model)


def sweep_family(models: list[WarpedModel], base: BackgroundData, levels: int = 6) -> FamilyReport:
    """Fit the constants of the gradient bound, the lower bound on R and the C^1 bound on every model."""
    report = FamilyReport()
    checks = {
        "property4": lambda m, gp, R: check_property4(m, gp, R, base),
        "property5": lambda m, gp, R: check_property5(m, gp, R, base),
        "c1": c1_bound,
    }
    for kind in checks:
        report.constants[kind] = []
        report.reports[kind] = []
    for m in models:
        gp = solve_green_radial(m)
        radii = sample_levels(gp, levels)
        report.names.append(m.name)
        for kind, check in checks.items():
            rows = [check(m, gp, R) for R in radii]
            report.reports[kind].append(rows)
            report.constants[kind].append(max(r.constant for r in rows))
        logger.debug(f"Property constants of {m.name}: {[report.constants[k][-1] for k in checks]}")
    return report
