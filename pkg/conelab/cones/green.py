"""Radial Green's-function coordinate b = G^{1/(2-n)} on warped models.

Harmonicity of G = b^{2-n} together with the Stokes normalization reduces to
b' f^{n-1} = b^{n-1}, integrated with DOP853 away from an anchor value.
"""

from dataclasses import dataclass
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from conelab.cones.warped import WarpedModel
from conelab.errors import ModelError
from conelab.utils.logger import logger
from conelab.variations.finite_difference import derivative

RTOL = 1e-13
ATOL = 1e-15
BLOW_UP = 1e12


@dataclass
class GreenProfile:
    """Dense solution of the radial equation with its analytic derivatives."""

    model: WarpedModel
    anchor: tuple[float, float]
    inner: Any | None
    outer: Any | None

    def b(self, s: ArrayLike) -> NDArray:
        """b(s) from the dense output on either side of the anchor."""
        s = np.asarray(s, dtype=float)
        s_a, b_a = self.anchor
        if self.inner is None or self.outer is None:
            single = self.inner if self.inner is not None else self.outer
            out = single(s.ravel())[0].reshape(s.shape) if single is not None else np.full(s.shape, b_a)
            return out if out.ndim else float(out)
        out = np.where(s < s_a, self.inner(s.ravel())[0].reshape(s.shape), self.outer(s.ravel())[0].reshape(s.shape))
        return out if out.ndim else float(out)

    def db(self, s: ArrayLike) -> NDArray:
        """b' = (b/f)^{n-1}."""
        return (self.b(s) / self.model.f(s)) ** (self.model.n - 1)

    def _p(self, s: ArrayLike) -> NDArray:
        return self.db(s) / self.b(s) - self.model.df(s) / self.model.f(s)

    def ddb(self, s: ArrayLike) -> NDArray:
        """b'' = (n - 1) b' (b'/b - f'/f)."""
        return (self.model.n - 1) * self.db(s) * self._p(s)

    def dddb(self, s: ArrayLike) -> NDArray:
        """b''' by differentiating the expression for b''."""
        m = self.model
        b, b1, b2 = self.b(s), self.db(s), self.ddb(s)
        f, f1, f2 = m.f(s), m.df(s), m.ddf(s)
        dp = b2 / b - (b1 / b) ** 2 - f2 / f + (f1 / f) ** 2
        return (m.n - 1) * (b2 * self._p(s) + b1 * dp)

    @property
    def b_inf_estimate(self) -> float:
        """b' at the outer end."""
        return float(self.db(self.model.s1))

    @property
    def level_range(self) -> tuple[float, float]:
        """Levels b attained on the interval."""
        return float(self.b(self.model.s0)), float(self.b(self.model.s1))

    def level_s(self, level: float) -> float:
        """The s with b(s) = level."""
        lo, hi = self.level_range
        if not lo <= level <= hi:
            msg = f"level {level:g} not attained on {self.model.name} (b ranges over [{lo:g}, {hi:g}])"
            raise ModelError(msg)
        if level == lo:
            return self.model.s0
        if level == hi:
            return self.model.s1
        return float(brentq(lambda s: self.b(s) - level, self.model.s0, self.model.s1, xtol=1e-15, rtol=1e-15))

    def residual(self, s: float) -> float:
        """Relative defect of b^{2-n}(s) - b^{2-n}(anchor) = (n - 2) int_s^anchor f^{1-n}."""
        m = self.model
        s_a, b_a = self.anchor
        lo, hi = sorted((s, s_a))
        points = [p for p in m.breakpoints if lo < p < hi] or None
        integral, _ = quad(lambda t: float(m.f(t)) ** (1 - m.n), lo, hi, epsabs=1e-300, epsrel=1e-12, limit=400, points=points)
        if s > s_a:
            integral = -integral
        g = self.b(s) ** (2 - m.n)
        return abs(g - b_a ** (2 - m.n) - (m.n - 2) * integral) / g

    def _fd_steps(self, s: float) -> tuple[float, float]:
        h = 2e-3 * min(s, 1.0)
        return (h, 0.5 * h)

    def stokes_residual(self, s: float) -> float:
        """|(f/b)^{n-1} b' - 1| with b' differentiated from the dense solution."""
        m = self.model
        slope = derivative(lambda t: self.b(s + t), self._fd_steps(s))
        return abs(float((m.f(s) / self.b(s)) ** (m.n - 1)) * slope - 1.0)

    def trace_residual(self, s: float) -> float:
        """|Lap b^2 - 2n |grad b|^2| / 2n |grad b|^2 with b'' from differences of b'."""
        m = self.model
        b, b1 = self.b(s), self.db(s)
        b2 = derivative(lambda t: self.db(s + t), self._fd_steps(s))
        lap = 2.0 * b1**2 + 2.0 * b * b2 + 2.0 * (m.n - 1) * b * b1 * m.df(s) / m.f(s)
        return abs(float(lap) - 2 * m.n * b1**2) / (2 * m.n * b1**2)


def default_anchor(m: WarpedModel) -> tuple[float, float]:
    """Anchor at s1 continuing f linearly outward, so that G vanishes at infinity."""
    slope = float(m.df(m.s1))
    if slope <= 0.0:
        msg = f"{m.name} is not expanding at s = {m.s1:g} (f' = {slope:g})"
        raise ModelError(msg)
    return m.s1, float(m.f(m.s1)) * slope ** (1.0 / (m.n - 2))


def solve_green_radial(m: WarpedModel, anchor: tuple[float, float] | None = None) -> GreenProfile:
    """Integrate b' = (b/f)^{n-1} through the anchor over [s0, s1]."""
    s_a, b_a = anchor if anchor is not None else default_anchor(m)
    if not m.s0 <= s_a <= m.s1:
        msg = f"anchor s = {s_a:g} outside [{m.s0:g}, {m.s1:g}]"
        raise ModelError(msg)
    if b_a <= 0.0:
        msg = f"anchor value must be positive, got {b_a:g}"
        raise ModelError(msg)

    def rhs(s: float, y: NDArray) -> NDArray:
        return (y / m.f(s)) ** (m.n - 1)

    def blow_up(s: float, y: NDArray) -> float:
        return BLOW_UP - y[0]

    blow_up.terminal = True  # type: ignore[attr-defined]

    def run(end: float) -> Any | None:
        if end == s_a:
            return None
        sol = solve_ivp(rhs, (s_a, end), [b_a], method="DOP853", rtol=RTOL, atol=ATOL, dense_output=True, events=blow_up)
        if sol.status != 0 or not np.all(np.isfinite(sol.y)) or np.any(sol.y <= 0.0):
            msg = f"Green profile of {m.name} blew up or failed between s = {s_a:g} and {end:g}: {sol.message}"
            raise ModelError(msg)
        return sol.sol

    profile = GreenProfile(m, (s_a, b_a), run(m.s0), run(m.s1))
    logger.debug(f"Green profile of {m.name}: anchor ({s_a:g}, {b_a:.12g}), b_inf ~ {profile.b_inf_estimate:.12g}")
    return profile
