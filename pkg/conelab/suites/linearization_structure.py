"""York splitting, the variation basis and the assembled linearized operator."""

import numpy as np

from conelab.functionals import BackgroundData, TangentPair
from conelab.geometry.grid import SphereGrid
from conelab.geometry.harmonics import random_symmetric_tensor, real_harmonic
from conelab.linearization import (
    CONFORMAL,
    KernelBasis,
    OperatorMatrix,
    VariationBasis,
    assemble_L,
    build_variation_basis,
    conformal_image_tt_fraction,
    kernel_of_L,
    york_decompose,
)
from conelab.suites.base import SuiteContext

SYNTHETIC_SPECTRUM = (0.0, 0.0, 1.0, 2.0)
MIN_HALF_GRID = 16


def _york(ctx: SuiteContext, base: BackgroundData) -> None:
    tol = ctx.tol
    degree = ctx.config.grid.york_degree
    geo = base.geometry
    zero = np.zeros(base.grid.shape)
    splits = [york_decompose(random_symmetric_tensor(geo, ctx.rng, 3), base, degree) for _ in range(3)]
    ctx.check(
        "york-reconstruction",
        "h = h_TT + phi gbar + L_V gbar - (2 / (n-1)) div V gbar",
        tol.york,
        lambda: max(s.reconstruction_residual() for s in splits),
    )
    ctx.check(
        "york-lie-form",
        "h = h_TT + phi' gbar + L_V gbar",
        tol.york,
        lambda: max(s.lie_residual() for s in splits),
    )
    ctx.check(
        "york-orthogonal",
        "the TT, trace and conformal Killing parts are orthogonal",
        tol.york,
        lambda: max(s.orthogonality() for s in splits),
    )
    ctx.check(
        "york-divergence",
        "the TT part is divergence free",
        tol.york_divergence,
        lambda: max(s.divergence_defect() for s in splits),
    )
    ctx.check("york-trace", "the TT part is trace free", tol.york, lambda: max(s.trace_defect() for s in splits))

    def relative(part: np.ndarray, h: np.ndarray) -> float:
        return base.norm(TangentPair(part, zero)) / base.norm(TangentPair(h, zero))

    gauge = geo.lie_derivative_metric(geo.gradient(real_harmonic(base.grid, 3, 1)))
    gauge_split = york_decompose(gauge, base, degree)
    ctx.check(
        "york-pure-gauge",
        "L_V gbar has no TT part and is recovered from the trace and gauge parts",
        tol.york,
        lambda: max(relative(gauge_split.tt, gauge), gauge_split.reconstruction_residual()),
    )
    conformal = real_harmonic(base.grid, 2, -1)[..., None, None] * base.gbar
    conformal_split = york_decompose(conformal, base, degree)
    ctx.check(
        "york-pure-conformal",
        "phi gbar is its own trace part",
        tol.york,
        lambda: max(relative(conformal_split.tt, conformal), relative(conformal_split.gauge, conformal)),
    )


def _synthetic_kernel(ctx: SuiteContext) -> None:
    m = OperatorMatrix(np.diag(SYNTHETIC_SPECTRUM), [CONFORMAL] * len(SYNTHETIC_SPECTRUM))
    ctx.flag(
        "kernel-synthetic",
        "the near-kernel of diag(0, 0, 1, 2) is two dimensional",
        lambda: kernel_of_L(m, ctx.config.lojasiewicz.kernel_threshold).dim == 2,
    )
    ctx.flag("kernel-threshold-zero", "a zero threshold gives an empty kernel", lambda: kernel_of_L(m, 0.0).dim == 0)


def _certify_kernel(ctx: SuiteContext, name: str, basis: VariationBasis, kernel: KernelBasis) -> None:
    ctx.certify(
        name,
        {
            "grid": list(basis.base.grid.shape),
            "counts": basis.counts(),
            "kernel_dim": kernel.dim,
            "kernel_eigenvalues": kernel.eigenvalues.tolist(),
        },
    )


def run(ctx: SuiteContext) -> None:
    """York checks, basis defects, operator structure and its near-kernel."""
    tol = ctx.tol
    cfg = ctx.config
    base = ctx.base
    _york(ctx, base)
    _synthetic_kernel(ctx)

    basis = build_variation_basis(base, cfg.grid.degree, cfg.grid.york_degree)
    ctx.check(
        "basis-orthonormal",
        "the basis is orthonormal in the fixed inner product",
        tol.consistency,
        lambda: float(np.max(np.abs(basis.gram() - np.eye(len(basis))))),
    )
    ctx.check(
        "basis-tangent",
        "every element is orthogonal to grad A1",
        tol.consistency,
        basis.constraint_defect,
    )
    ctx.check("basis-gauge", "diffeo elements are L_V gbar for their tracked V", tol.gauge, basis.gauge_defect)
    ctx.check("basis-tt", "TT elements are trace and divergence free", tol.york_divergence, basis.tt_defect)

    m = assemble_L(basis, cfg.finite_difference.first_steps)
    ctx.result.matrices["operator_L"] = m
    ctx.check("operator-symmetric", "L is symmetric in the fixed inner product", tol.symmetry, m.symmetry_defect)
    ctx.check("operator-gauge", "diffeomorphism directions lie in the kernel of L", tol.gauge, m.gauge_defect)
    ctx.check("operator-tt-block", "L preserves the TT block", tol.block, m.tt_offdiagonal)

    conformal = basis.indices(CONFORMAL)
    ctx.check(
        "conformal-image-tt",
        "L maps conformal directions to directions without TT part",
        tol.block,
        lambda: max(
            conformal_image_tt_fraction(basis, j, cfg.finite_difference.first_steps, cfg.grid.york_degree)
            for j in conformal[:3]
        ),
    )

    kernel = kernel_of_L(m, cfg.lojasiewicz.kernel_threshold)
    spectrum = np.sort(kernel.spectrum)
    ctx.curve("spectrum", list(range(spectrum.size)), spectrum.tolist(), xlabel="index", ylabel="eigenvalue of L")
    _certify_kernel(ctx, "operator", basis, kernel)

    half = SphereGrid(cfg.grid.n_lat // 2, cfg.grid.n_lon // 2)
    if half.n_lat >= MIN_HALF_GRID:
        coarse = build_variation_basis(BackgroundData.round_sphere(half), cfg.grid.degree, cfg.grid.york_degree)
        coarse_kernel = kernel_of_L(
            assemble_L(coarse, cfg.finite_difference.first_steps), cfg.lojasiewicz.kernel_threshold
        )
        _certify_kernel(ctx, "operator-half-grid", coarse, coarse_kernel)
