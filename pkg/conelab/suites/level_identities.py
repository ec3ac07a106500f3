"""Identities for B_b and the level sets of b, evaluated on every model."""

from conelab.cones import IdentityReport, check_level_identities, eguchi_hanson_model, level_data, preset, solve_green_radial
from conelab.cones.identities import GENERAL, RICCI
from conelab.cones.properties import sample_levels
from conelab.suites.base import SuiteContext

WARPED = ("euclidean", "cone", "tanh", "polynomial")
RICCI_FLAT = ("euclidean", "eguchi-hanson")
EH_LEVELS = (0.8, 1.5, 3.0, 10.0)


def _worst(reports: list[IdentityReport], group: str, names: tuple[str, ...]) -> dict[str, float]:
    return {name: max(getattr(r, group)[name] for r in reports) for name in names}


def _record(ctx: SuiteContext, model: str, reports: list[IdentityReport]) -> None:
    tol = ctx.tol
    ctx.certify(
        f"identities-{model}",
        {"general": _worst(reports, "general", GENERAL), "ricci": _worst(reports, "ricci", RICCI)},
    )
    ctx.check(
        f"general-{model}",
        "B_b(grad b) = 2b grad |grad b|^2 and the decomposition of B_b along a level",
        tol.identity_general,
        lambda: max(r.worst("general") for r in reports),
    )
    ctx.check(
        f"ricci-{model}",
        "div B_b, Lap |grad b|^2, the level scalar curvature and the Gauss equation with ambient Ricci terms",
        tol.identity_ricci,
        lambda: max(r.worst("ricci") for r in reports),
    )
    if model in RICCI_FLAT:
        ctx.check(
            f"ricci-flat-form-{model}",
            "the same identities with Ric = 0",
            tol.identity_ricci_flat,
            lambda: max(r.worst("ricci_flat") for r in reports),
        )


def run(ctx: SuiteContext) -> None:
    """Metric-general identities everywhere, Ricci-free forms only on Ricci-flat models."""
    cones = ctx.config.cones
    for name in WARPED:
        m = preset(name, cones)
        gp = solve_green_radial(m)
        reports = [check_level_identities(level_data(m, gp, r)) for r in sample_levels(gp, cones.radii)]
        _record(ctx, name, reports)

    eh = eguchi_hanson_model(cones.eguchi_hanson_a)
    reports = [check_level_identities(eh.level_data_at(r * eh.a)) for r in EH_LEVELS]
    _record(ctx, eh.name, reports)
