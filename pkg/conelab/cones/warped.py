"""Warped products ds^2 + f(s)^2 g_round on an interval times S^{n-1}."""

from dataclasses import dataclass
from typing import Protocol

import numpy as np
from numpy.polynomial import Polynomial
from numpy.typing import ArrayLike, NDArray
from scipy.special import gamma

from conelab.errors import ModelError
from conelab.utils.config import ConeConfig


def sphere_area(n: int) -> float:
    """Volume of the unit round S^{n-1}."""
    return float(2.0 * np.pi ** (n / 2) / gamma(n / 2))


def _logcosh(x: NDArray) -> NDArray:
    a = np.abs(x)
    return a + np.log1p(np.exp(-2.0 * a)) - np.log(2.0)


class Warp(Protocol):
    """Warping function with three derivatives."""

    def f(self, s: ArrayLike) -> NDArray:
        """f(s)."""
        ...

    def d1(self, s: ArrayLike) -> NDArray:
        """f'(s)."""
        ...

    def d2(self, s: ArrayLike) -> NDArray:
        """f''(s)."""
        ...

    def d3(self, s: ArrayLike) -> NDArray:
        """f'''(s)."""
        ...


@dataclass(frozen=True)
class LinearWarp:
    """f = a s, the exact cone of slope a."""

    a: float

    def f(self, s: ArrayLike) -> NDArray:
        return self.a * np.asarray(s, dtype=float)

    def d1(self, s: ArrayLike) -> NDArray:
        return np.full_like(np.asarray(s, dtype=float), self.a)

    def d2(self, s: ArrayLike) -> NDArray:
        return np.zeros_like(np.asarray(s, dtype=float))

    def d3(self, s: ArrayLike) -> NDArray:
        return np.zeros_like(np.asarray(s, dtype=float))


@dataclass(frozen=True)
class TanhWarp:
    """Slope moving from a_in to a_out around s = mid over a width; f(0) = 0."""

    a_in: float
    a_out: float
    mid: float
    width: float

    def _u(self, s: ArrayLike) -> NDArray:
        return (np.asarray(s, dtype=float) - self.mid) / self.width

    def f(self, s: ArrayLike) -> NDArray:
        s = np.asarray(s, dtype=float)
        jump = self.a_out - self.a_in
        shift = _logcosh(self._u(s)) - _logcosh(np.asarray(self.mid / self.width))
        return self.a_in * s + 0.5 * jump * (s + self.width * shift)

    def d1(self, s: ArrayLike) -> NDArray:
        return self.a_in + 0.5 * (self.a_out - self.a_in) * (1.0 + np.tanh(self._u(s)))

    def d2(self, s: ArrayLike) -> NDArray:
        return 0.5 * (self.a_out - self.a_in) / self.width / np.cosh(self._u(s)) ** 2

    def d3(self, s: ArrayLike) -> NDArray:
        u = self._u(s)
        return -(self.a_out - self.a_in) / self.width**2 * np.tanh(u) / np.cosh(u) ** 2


@dataclass(frozen=True)
class PolynomialWarp:
    """f = sum c_k s^k."""

    coefficients: tuple[float, ...]

    @property
    def poly(self) -> Polynomial:
        return Polynomial(self.coefficients)

    def f(self, s: ArrayLike) -> NDArray:
        return self.poly(np.asarray(s, dtype=float))

    def d1(self, s: ArrayLike) -> NDArray:
        return self.poly.deriv(1)(np.asarray(s, dtype=float))

    def d2(self, s: ArrayLike) -> NDArray:
        return self.poly.deriv(2)(np.asarray(s, dtype=float))

    def d3(self, s: ArrayLike) -> NDArray:
        return self.poly.deriv(3)(np.asarray(s, dtype=float))


@dataclass(frozen=True)
class WarpedModel:
    """The metric ds^2 + f(s)^2 g_round on [s0, s1] x S^{n-1}."""

    n: int
    s0: float
    s1: float
    warp: Warp
    name: str = "warped"

    def __post_init__(self) -> None:
        """Reject empty intervals, low dimensions and vanishing warps."""
        if self.n < 3:
            msg = f"warped models need n >= 3, got {self.n}"
            raise ModelError(msg)
        if not 0.0 < self.s0 < self.s1:
            msg = f"interval [{self.s0}, {self.s1}] is empty or touches the vertex"
            raise ModelError(msg)
        samples = self.warp.f(np.linspace(self.s0, self.s1, 2001))
        if np.any(samples <= 0.0):
            msg = f"warp of {self.name} vanishes on [{self.s0}, {self.s1}]"
            raise ModelError(msg)

    @property
    def is_cone(self) -> bool:
        """Exact cone f = a s."""
        return isinstance(self.warp, LinearWarp)

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the warp changes fastest, for quadrature."""
        if isinstance(self.warp, TanhWarp) and self.s0 < self.warp.mid < self.s1:
            return (self.warp.mid,)
        return ()

    @property
    def area(self) -> float:
        """Volume of the unit cross-section."""
        return sphere_area(self.n)

    def f(self, s: ArrayLike) -> NDArray:
        return self.warp.f(s)

    def df(self, s: ArrayLike) -> NDArray:
        return self.warp.d1(s)

    def ddf(self, s: ArrayLike) -> NDArray:
        return self.warp.d2(s)

    def dddf(self, s: ArrayLike) -> NDArray:
        return self.warp.d3(s)

    def ricci_radial(self, s: ArrayLike) -> NDArray:
        """Ric(d_s, d_s) = -(n - 1) f''/f."""
        return -(self.n - 1) * self.ddf(s) / self.f(s)

    def ricci_tangential(self, s: ArrayLike) -> NDArray:
        """Ric on a unit tangent vector: -f''/f + (n - 2)(1 - f'^2)/f^2."""
        f = self.f(s)
        return -self.ddf(s) / f + (self.n - 2) * (1.0 - self.df(s) ** 2) / f**2

    def sectional_radial(self, s: ArrayLike) -> NDArray:
        """Curvature of a plane containing d_s."""
        return -self.ddf(s) / self.f(s)

    def scalar(self, s: ArrayLike) -> NDArray:
        """Scalar curvature of the ambient metric."""
        return self.ricci_radial(s) + (self.n - 1) * self.ricci_tangential(s)

    def ricci_norm2(self, s: ArrayLike) -> NDArray:
        """|Ric|^2."""
        return self.ricci_radial(s) ** 2 + (self.n - 1) * self.ricci_tangential(s) ** 2


def euclidean(n: int = 3, s0: float = 0.2, s1: float = 40.0) -> WarpedModel:
    """Flat R^n in polar coordinates."""
    return WarpedModel(n, s0, s1, LinearWarp(1.0), "euclidean")


def cone(a: float, n: int = 3, s0: float = 0.2, s1: float = 40.0) -> WarpedModel:
    """Cone of slope a over the round sphere."""
    return WarpedModel(n, s0, s1, LinearWarp(a), f"cone({a:g})")


def transition(
    a_out: float, a_in: float = 1.0, mid: float = 2.0, width: float = 0.5, n: int = 3, s0: float = 0.2, s1: float = 40.0
) -> WarpedModel:
    """Smooth interpolation between slopes a_in and a_out."""
    return WarpedModel(n, s0, s1, TanhWarp(a_in, a_out, mid, width), f"tanh({a_in:g}->{a_out:g})")


def preset(name: str, config: ConeConfig, n: int = 3) -> WarpedModel:
    """Named model built from the cone configuration."""
    s0, s1 = config.s_inner, config.s_outer
    if name == "euclidean":
        return euclidean(n, s0, s1)
    if name == "cone":
        return cone(config.cone_slope, n, s0, s1)
    if name == "tanh":
        return transition(config.cone_slope, 1.0, config.transition_mid, config.transition_width, n, s0, s1)
    if name == "polynomial":
        return WarpedModel(n, s0, s1, PolynomialWarp(tuple(config.polynomial)), "polynomial")
    msg = f"unknown warp preset '{name}'"
    raise ModelError(msg)


def warp_family(config: ConeConfig, n: int = 3) -> list[WarpedModel]:
    """Transition warps whose outer slopes approach 1."""
    return [
        transition(a, 1.0, config.transition_mid, config.transition_width, n, config.s_inner, config.s_outer)
        for a in config.family_slopes
    ]
