"""Real spherical harmonics and band-limited test fields."""

from math import factorial

import numpy as np
from numpy.random import Generator
from scipy.special import lpmv

from conelab.geometry.fields import ScalarField, SymTensorField, VectorField, outer
from conelab.geometry.grid import SphereGrid, TorusGrid
from conelab.geometry.tensors import MetricGeometry


def harmonic_indices(degree: int, min_degree: int = 0) -> list[tuple[int, int]]:
    """All (l, m) with min_degree <= l <= degree, m in [-l, l]."""
    return [(l, m) for l in range(min_degree, degree + 1) for m in range(-l, l + 1)]


def real_harmonic(grid: SphereGrid, l: int, m: int) -> ScalarField:
    """L2-orthonormal real spherical harmonic Y_lm on the unit sphere."""
    if abs(m) > l:
        msg = f"|m| must not exceed l, got l={l}, m={m}"
        raise ValueError(msg)
    am = abs(m)
    norm = np.sqrt((2 * l + 1) / (4.0 * np.pi) * factorial(l - am) / factorial(l + am))
    if m != 0:
        norm *= np.sqrt(2.0)
    legendre = lpmv(am, l, grid.x)
    th, ph = grid.mesh
    del th
    if m > 0:
        angular = np.cos(m * ph)
    elif m < 0:
        angular = np.sin(am * ph)
    else:
        angular = np.ones_like(ph)
    return norm * legendre[:, None] * angular


def torus_mode(grid: TorusGrid, k1: int, k2: int, phase: float = 0.0) -> ScalarField:
    """cos(k1 x + k2 y + phase) on the periodic square."""
    x, y = grid.mesh
    return np.cos(k1 * x + k2 * y + phase)


def random_scalar(
    grid: SphereGrid | TorusGrid,
    rng: Generator,
    degree: int,
    min_degree: int = 0,
    amplitude: float = 1.0,
) -> ScalarField:
    """Random band-limited scalar with coefficients decaying like 1/(1+l)."""
    f = np.zeros(grid.shape)
    if isinstance(grid, TorusGrid):
        for k1 in range(-degree, degree + 1):
            for k2 in range(-degree, degree + 1):
                k = abs(k1) + abs(k2)
                if min_degree <= k <= degree:
                    f += rng.normal() / (1 + k) * torus_mode(grid, k1, k2, rng.uniform(0, 2 * np.pi))
        return amplitude * f
    for l, m in harmonic_indices(degree, min_degree):
        f += rng.normal() / (1 + l) * real_harmonic(grid, l, m)
    return amplitude * f


def gradient_forms(geometry: MetricGeometry, degree: int) -> tuple[list[VectorField], list[VectorField]]:
    """Gradients dY and rotated gradients *dY of the harmonics 1 <= l <= degree."""
    grads: list[VectorField] = []
    rotated: list[VectorField] = []
    grid = geometry.grid
    if isinstance(grid, TorusGrid):
        modes = [
            torus_mode(grid, k1, k2, phase)
            for k1 in range(-degree, degree + 1)
            for k2 in range(degree + 1)
            if 0 < abs(k1) + k2 <= degree and (k2 > 0 or k1 > 0)
            for phase in (0.0, 0.5 * np.pi)
        ]
        for mode in modes:
            du = geometry.gradient(mode)
            grads.append(du)
            rotated.append(geometry.rotate(du))
        # parallel 1-forms span the harmonic part on the torus
        for axis in range(2):
            e = np.zeros((*grid.shape, 2))
            e[..., axis] = 1.0
            grads.append(e)
        return grads, rotated
    for l, m in harmonic_indices(degree, 1):
        du = geometry.gradient(real_harmonic(grid, l, m))
        grads.append(du)
        rotated.append(geometry.rotate(du))
    return grads, rotated


def random_symmetric_tensor(
    geometry: MetricGeometry,
    rng: Generator,
    degree: int = 3,
    amplitude: float = 1.0,
) -> SymTensorField:
    """Smooth random symmetric 2-tensor phi1 g + Hess phi2 + dphi3 dphi3 + L_{*dphi4} g."""
    grid = geometry.grid
    phis = [random_scalar(grid, rng, degree) for _ in range(4)]
    d3 = geometry.gradient(phis[2])
    h = (
        phis[0][..., None, None] * geometry.g
        + geometry.hessian(phis[1])
        + outer(d3, d3)
        + geometry.lie_derivative_metric(geometry.rotate(geometry.gradient(phis[3])))
    )
    scale = np.max(np.abs(geometry.to_frame(h)))
    return amplitude * h / scale
