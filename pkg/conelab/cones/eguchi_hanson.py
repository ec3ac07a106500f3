"""The Eguchi-Hanson instanton as a Ricci-flat, asymptotically conical oracle.

In the coordinates (rho, theta, phi, psi) with F = 1 - a^4 / rho^4,

    g = d rho^2 / F + rho^2 / 4 (sigma_1^2 + sigma_2^2) + rho^2 F / 4 sigma_3^2,

on rho > a with psi of period 2 pi. The metric is asymptotic to the cone
over RP^3, so the Green coordinate b = G^{-1/2} has slope 1 / sqrt 2 at
infinity. The level sets of b are the Berger spheres rho = const, so the
level-set machinery of the warped models applies with three principal
curvatures instead of one repeated curvature.
"""

from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from typing import Any

import numpy as np
import sympy as sp
from scipy.integrate import quad
from scipy.optimize import brentq
from sympy.codegen.cfunctions import log1p

from conelab.cones.curvature import CoordinateMetric
from conelab.cones.levelset import LevelSetData, QValue, a_prime, a_value
from conelab.errors import ModelError
from conelab.utils.logger import logger

B_INF = 1.0 / np.sqrt(2.0)
DIMENSION = 4
CUTOFF = 1e4

_rho, _theta, _phi, _psi = sp.symbols("rho theta phi psi", real=True)
_a = sp.Symbol("a", positive=True)


def eguchi_hanson_metric() -> CoordinateMetric:
    """The metric in (rho, theta, phi, psi) with the parameter a."""
    F = 1 - _a**4 / _rho**4
    c, s = sp.cos(_theta), sp.sin(_theta)
    g = sp.zeros(4, 4)
    g[0, 0] = 1 / F
    g[1, 1] = _rho**2 / 4
    g[2, 2] = _rho**2 / 4 * s**2 + _rho**2 * F / 4 * c**2
    g[2, 3] = g[3, 2] = _rho**2 * F / 4 * c
    g[3, 3] = _rho**2 * F / 4
    return CoordinateMetric(g, (_rho, _theta, _phi, _psi), (_a,))


def _radial_jets() -> Callable[..., Any]:
    """b, its arclength derivatives, the principal curvatures and their derivatives."""
    F = 1 - _a**4 / _rho**4
    root = sp.sqrt(F)
    G = log1p(2 * _a**2 / (_rho**2 - _a**2)) / _a**2
    b = G ** sp.Rational(-1, 2)

    def d(e: sp.Expr) -> sp.Expr:
        return root * sp.diff(e, _rho)

    b1 = d(b)
    b2 = d(b1)
    b3 = d(b2)
    k_round = root / _rho
    k_fiber = root * (1 / _rho + sp.diff(F, _rho) / (2 * F))
    return sp.lambdify((_rho, _a), (b, b1, b2, b3, k_round, k_fiber, d(k_round), d(k_fiber)), "numpy")


@dataclass(frozen=True, eq=False)
class EguchiHansonModel:
    """Eguchi-Hanson metric of parameter a, evaluated along rho."""

    a: float = 1.0
    name: str = "eguchi-hanson"

    def __post_init__(self) -> None:
        """Reject a non-positive parameter."""
        if self.a <= 0.0:
            msg = f"Eguchi-Hanson parameter must be positive, got {self.a}"
            raise ModelError(msg)

    @property
    def n(self) -> int:
        """Ambient dimension."""
        return DIMENSION

    @cached_property
    def metric(self) -> CoordinateMetric:
        """The coordinate metric, Ricci tensor derived on first use."""
        return eguchi_hanson_metric()

    @cached_property
    def _jets(self) -> Callable[..., Any]:
        return _radial_jets()

    def F(self, rho: float) -> float:
        """1 - a^4 / rho^4."""
        return 1.0 - (self.a / rho) ** 4

    def green(self, rho: float) -> float:
        """G = a^-2 log((rho^2 + a^2) / (rho^2 - a^2)), harmonic and ~ 2 / rho^2."""
        self._check(rho)
        return float(np.log1p(2.0 * self.a**2 / (rho**2 - self.a**2)) / self.a**2)

    def b(self, rho: float) -> float:
        """b = G^{-1/2}."""
        return self.green(rho) ** -0.5

    def _check(self, rho: float) -> None:
        if not rho > self.a:
            msg = f"rho = {rho:g} is inside the bolt rho = {self.a:g}"
            raise ModelError(msg)

    def level_rho(self, r: float) -> float:
        """The rho with b(rho) = r."""
        if r <= 0.0:
            msg = f"level must be positive, got {r:g}"
            raise ModelError(msg)
        lo = self.a * (1.0 + 1e-12)
        hi = max(4.0 * r / B_INF, 2.0 * self.a)
        while self.b(hi) < r:
            hi *= 2.0
        if self.b(lo) >= r:
            return lo
        return float(brentq(lambda rho: self.b(rho) - r, lo, hi, xtol=1e-15, rtol=1e-15))

    def area(self, rho: float) -> float:
        """Volume of the level set rho = const."""
        return float(np.pi**2 * rho**3 * np.sqrt(self.F(rho)))

    def level_data(self, rho: float) -> LevelSetData:
        """Level-set data at rho; the ambient metric is Ricci flat."""
        self._check(rho)
        b, b1, b2, b3, k1, k3, dk1, dk3 = (float(x) for x in self._jets(rho, self.a))
        A, C = rho**2 / 4.0, rho**2 * self.F(rho) / 4.0
        round_ricci = (2.0 * A - C) / (2.0 * A**2)
        return LevelSetData(
            n=DIMENSION,
            level=b,
            b1=b1,
            b2=b2,
            b3=b3,
            kappa=np.array([k1, k1, k3]),
            kappa1=np.array([dk1, dk1, dk3]),
            area=self.area(rho),
            level_scalar=(4.0 * A - C) / (2.0 * A**2),
            level_ricci=np.array([round_ricci, round_ricci, C / (2.0 * A**2)]),
        )

    def level_data_at(self, r: float) -> LevelSetData:
        """Level-set data at b = r."""
        return self.level_data(self.level_rho(r))

    def A(self, r: float) -> float:
        """A(r)."""
        return a_value(self.level_data_at(r))

    def Aprime(self, r: float) -> float:
        """A'(r)."""
        return a_prime(self.level_data_at(r))

    def _integral(self, rho: float, weight: Callable[[LevelSetData], float]) -> float:
        # dvol = pi^2 rho^3 d rho on the region outside the level
        def density(t: float) -> float:
            return weight(self.level_data(t)) * np.pi**2 * t**3

        edges = rho * np.array([1.0, 2.0, 10.0, 100.0, CUTOFF])
        return float(
            sum(quad(density, lo, hi, epsabs=1e-300, epsrel=1e-10, limit=400)[0] for lo, hi in zip(edges, edges[1:]))
        )

    def Q(self, r: float) -> QValue:
        """Q(r), with the integrand decaying like rho^{-9} beyond the cutoff."""
        rho = self.level_rho(r)
        value = self._integral(rho, lambda d: d.level ** (-DIMENSION) * d.norm2)
        outer = self.level_data(CUTOFF * rho)
        tail = outer.level ** (-DIMENSION) * outer.norm2 * np.pi**2 * (CUTOFF * rho) ** 4 / 8.0
        return QValue(value, float(tail))

    def monotonicity_residual(self, r: float) -> float:
        """Relative defect of A'(r) = -r^{n-3} / 2 times the integral of b^{2-2n} |B_b|^2 over b >= r."""
        rhs = -0.5 * r ** (DIMENSION - 3) * self._integral(
            self.level_rho(r), lambda d: d.level ** (2 - 2 * DIMENSION) * d.norm2
        )
        lhs = self.Aprime(r)
        return abs(lhs - rhs) / max(abs(lhs), abs(rhs))

    def ricci_residual(self, rho: float, theta: float = 1.1) -> float:
        """Scale-invariant size rho^2 |Ric|_g of the coordinate Ricci tensor."""
        self._check(rho)
        return rho**2 * self.metric.ricci_norm((rho, theta, 0.0, 0.0), self.a)

    def slope_residual(self, rho: float) -> float:
        """|b / rho - 1 / sqrt 2| / (1 / sqrt 2)."""
        return abs(self.b(rho) / rho - B_INF) / B_INF


def eguchi_hanson_model(a: float = 1.0) -> EguchiHansonModel:
    """Build the model and log its asymptotic slope."""
    model = EguchiHansonModel(a)
    logger.debug(f"Eguchi-Hanson model with a = {a:g}, b / rho at 100 a = {model.b(100.0 * a) / (100.0 * a):.12g}")
    return model
