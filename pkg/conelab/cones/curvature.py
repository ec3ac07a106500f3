"""Symbolic Christoffel symbols and Ricci tensors of coordinate metrics.

Used as an oracle: a metric is written in coordinates with sympy, its Ricci
tensor is derived once, and the result is lambdified for numerical checks.
"""

from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Any

import numpy as np
import sympy as sp
from numpy.typing import NDArray

from conelab.errors import MetricError


def christoffel(g: sp.Matrix, coords: tuple[sp.Symbol, ...]) -> list[sp.Matrix]:
    """Gamma^a_{bc}, one matrix per upper index a."""
    dim = len(coords)
    if g.shape != (dim, dim):
        msg = f"metric of shape {g.shape} does not match {dim} coordinates"
        raise MetricError(msg)
    ginv = g.inv()
    dg = [g.diff(x) for x in coords]
    out = []
    for a in range(dim):
        gamma = sp.zeros(dim, dim)
        for b, c in product(range(dim), repeat=2):
            if c < b:
                gamma[b, c] = gamma[c, b]
                continue
            term = sum(ginv[a, d] * (dg[b][d, c] + dg[c][d, b] - dg[d][b, c]) for d in range(dim))
            gamma[b, c] = sp.simplify(term / 2)
        out.append(gamma)
    return out


def ricci(g: sp.Matrix, coords: tuple[sp.Symbol, ...]) -> sp.Matrix:
    """R_bd = d_a Gamma^a_bd - d_d Gamma^a_ba + Gamma^a_ae Gamma^e_bd - Gamma^a_de Gamma^e_ba."""
    dim = len(coords)
    gamma = christoffel(g, coords)
    out = sp.zeros(dim, dim)
    for b, d in product(range(dim), repeat=2):
        if d < b:
            out[b, d] = out[d, b]
            continue
        term = 0
        for a in range(dim):
            term += sp.diff(gamma[a][b, d], coords[a]) - sp.diff(gamma[a][b, a], coords[d])
            for e in range(dim):
                term += gamma[a][a, e] * gamma[e][b, d] - gamma[a][d, e] * gamma[e][b, a]
        out[b, d] = term
    return out


@dataclass(frozen=True, eq=False)
class CoordinateMetric:
    """A metric in coordinates with lambdified metric and Ricci tensors."""

    g: sp.Matrix
    coords: tuple[sp.Symbol, ...]
    parameters: tuple[sp.Symbol, ...] = ()

    @cached_property
    def ricci(self) -> sp.Matrix:
        """Symbolic Ricci tensor."""
        return ricci(self.g, self.coords)

    @cached_property
    def _metric_fn(self) -> Callable[..., Any]:
        return sp.lambdify((*self.coords, *self.parameters), self.g, "numpy")

    @cached_property
    def _ricci_fn(self) -> Callable[..., Any]:
        return sp.lambdify((*self.coords, *self.parameters), self.ricci, "numpy")

    def metric_at(self, point: tuple[float, ...], *params: float) -> NDArray:
        """g at a point."""
        return np.asarray(self._metric_fn(*point, *params), dtype=float)

    def ricci_at(self, point: tuple[float, ...], *params: float) -> NDArray:
        """Ric at a point."""
        return np.asarray(self._ricci_fn(*point, *params), dtype=float)

    def ricci_norm(self, point: tuple[float, ...], *params: float) -> float:
        """|Ric|_g at a point."""
        ginv = np.linalg.inv(self.metric_at(point, *params))
        ric = self.ricci_at(point, *params)
        return float(np.sqrt(max(np.einsum("ac,bd,ab,cd->", ginv, ginv, ric, ric), 0.0)))

    def scalar_at(self, point: tuple[float, ...], *params: float) -> float:
        """Scalar curvature at a point."""
        ginv = np.linalg.inv(self.metric_at(point, *params))
        return float(np.sum(ginv * self.ricci_at(point, *params)))
